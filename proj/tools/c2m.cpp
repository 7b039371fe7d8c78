// Command-line front end: translate C programs of the supported subset into
// the temporal-logic target language, run either side, and compare them.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "c2m/equiv.hpp"
#include "c2m/msvl_interp.hpp"
#include "c2m/stats.hpp"
#include "c2m/translator.hpp"
#include "c2m/xdc_frontend.hpp"
#include "c2m/xdc_interp.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kInput = 2;
constexpr int kNotEquiv = 3;
constexpr int kTimeout = 4;

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

int64_t default_fuel() {
  if (const char* e = std::getenv("C2M_FUEL")) {
    char* end = nullptr;
    long long v = std::strtoll(e, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 1000000;
}

void print_diags(const c2m::DiagnosticSink& sink) {
  for (const auto& d : sink.diags) std::cerr << d.render() << "\n";
}

nlohmann::json diags_json(const c2m::DiagnosticSink& sink) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& d : sink.diags) a.push_back(d.render());
  return a;
}

std::string load_externs(const std::string& path, bool* ok) {
  *ok = true;
  if (path.empty()) return "{}";
  std::string text;
  if (!read_file(path, &text)) {
    std::cerr << "cannot read externs file: " << path << "\n";
    *ok = false;
    return "{}";
  }
  return text;
}

int cmd_translate(const std::string& file, bool canonical, bool json) {
  std::string src;
  if (!read_file(file, &src)) {
    std::cerr << "cannot read " << file << "\n";
    return kInput;
  }
  c2m::DiagnosticSink sink;
  auto out = c2m::translate_source(src, file, sink, canonical);
  if (!out) {
    if (json) {
      nlohmann::json j;
      j["ok"] = false;
      j["diagnostics"] = diags_json(sink);
      std::cout << j.dump(2) << "\n";
    } else {
      print_diags(sink);
    }
    return kInput;
  }
  if (json) {
    nlohmann::json j;
    j["ok"] = true;
    j["translated"] = *out;
    j["diagnostics"] = diags_json(sink);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << *out;
  }
  return kOk;
}

nlohmann::json snapshot_json(const std::vector<std::string>& lines) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& l : lines) a.push_back(l);
  return a;
}

int cmd_run(const std::string& file, int64_t fuel, const std::string& externs,
            bool json) {
  std::string src;
  if (!read_file(file, &src)) {
    std::cerr << "cannot read " << file << "\n";
    return kInput;
  }
  bool ext_ok;
  std::string ext_text = load_externs(externs, &ext_ok);
  if (!ext_ok) return kInput;

  bool is_c = file.size() >= 2 && file.substr(file.size() - 2) == ".c";
  c2m::DiagnosticSink sink;
  std::string status, error;
  int64_t exit_code = 0;
  std::vector<std::string> cells, trace;
  nlohmann::json counts = nlohmann::json::object();
  int rc = kOk;

  if (is_c) {
    auto prog = c2m::xdc::analyze(src, file, sink);
    if (!prog) {
      print_diags(sink);
      return kInput;
    }
    auto rr = c2m::xdc::Interpreter(*prog, c2m::ExternEnv::from_json(ext_text),
                                    fuel)
                  .run();
    switch (rr.k) {
      case c2m::xdc::RunResult::K::Exit: status = "exit"; break;
      case c2m::xdc::RunResult::K::Timeout:
        status = "timeout";
        rc = kTimeout;
        break;
      default:
        status = "error";
        rc = kInternal;
        break;
    }
    exit_code = rr.exit_code;
    error = rr.error;
    for (const auto& c : rr.snapshot)
      cells.push_back(c.path + " = " + c.value.show());
    for (const auto& e : rr.trace) trace.push_back(e.render());
    for (const auto& [k, n] : rr.rule_counts) counts[k] = n;
  } else {
    auto prog = c2m::msvl::parse_msvl(src, file, sink);
    if (!prog) {
      print_diags(sink);
      return kInput;
    }
    auto rr = c2m::msvl::Interpreter(*prog,
                                     c2m::ExternEnv::from_json(ext_text), fuel)
                  .run();
    switch (rr.k) {
      case c2m::msvl::RunResult::K::Terminated: status = "exit"; break;
      case c2m::msvl::RunResult::K::Timeout:
        status = "timeout";
        rc = kTimeout;
        break;
      case c2m::msvl::RunResult::K::Infeasible:
        status = "infeasible";
        rc = kInternal;
        break;
      default:
        status = "error";
        rc = kInternal;
        break;
    }
    exit_code = rr.exit_code;
    error = rr.error;
    for (const auto& c : rr.snapshot)
      cells.push_back(c.path + " = " + c.value.show());
    for (const auto& e : rr.trace) trace.push_back(e.render());
    for (const auto& [k, n] : rr.rule_counts) counts[k] = n;
  }

  if (json) {
    nlohmann::json j;
    j["status"] = status;
    j["exit_code"] = exit_code;
    if (!error.empty()) j["error"] = error;
    j["state"] = snapshot_json(cells);
    j["trace"] = snapshot_json(trace);
    j["rules"] = counts;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "status: " << status << "\n";
    if (!error.empty()) std::cout << "error: " << error << "\n";
    std::cout << "exit code: " << exit_code << "\n";
    for (const auto& c : cells) std::cout << "  " << c << "\n";
    if (!trace.empty()) {
      std::cout << "trace:\n";
      for (const auto& t : trace) std::cout << "  " << t << "\n";
    }
  }
  return rc;
}

int cmd_diff(const std::string& file, int64_t fuel, const std::string& externs,
             bool json) {
  std::string src;
  if (!read_file(file, &src)) {
    std::cerr << "cannot read " << file << "\n";
    return kInput;
  }
  bool ext_ok;
  std::string ext_text = load_externs(externs, &ext_ok);
  if (!ext_ok) return kInput;

  c2m::DiagnosticSink sink;
  auto v = c2m::differential_run(src, file, ext_text, fuel, nullptr, &sink);
  if (sink.has_errors()) {
    if (json) {
      nlohmann::json j;
      j["verdict"] = "rejected";
      j["diagnostics"] = diags_json(sink);
      std::cout << j.dump(2) << "\n";
    } else {
      print_diags(sink);
    }
    return kInput;
  }
  if (json)
    std::cout << v.to_json() << "\n";
  else
    std::cout << v.to_string() << "\n";
  if (v.ok()) return kOk;
  return kNotEquiv;
}

int cmd_stats(const std::vector<std::string>& files, bool json) {
  std::vector<c2m::FileStats> stats;
  for (const auto& file : files) {
    std::string src;
    if (!read_file(file, &src)) {
      std::cerr << "cannot read " << file << "\n";
      return kInput;
    }
    c2m::DiagnosticSink sink;
    auto prog = c2m::xdc::analyze(src, file, sink);
    if (!prog) {
      print_diags(sink);
      return kInput;
    }
    auto t0 = std::chrono::steady_clock::now();
    c2m::Translator tr(*prog);
    auto mprog = tr.prgm_tr(sink);
    auto t1 = std::chrono::steady_clock::now();
    if (!mprog) {
      print_diags(sink);
      return kInput;
    }
    std::string text = c2m::msvl::emit(*mprog);
    c2m::FileStats fs;
    fs.file = file;
    fs.loc = c2m::count_code_lines(src);
    fs.lom = c2m::count_code_lines(text);
    fs.src_nodes = c2m::xdc::count_nodes(*prog);
    fs.out_nodes = c2m::msvl::count_nodes(*mprog);
    fs.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
    stats.push_back(fs);
  }
  std::vector<double> xs, ys;
  for (const auto& s : stats) {
    xs.push_back(s.src_nodes);
    ys.push_back(s.out_nodes);
  }
  c2m::LinearFit fit;
  if (stats.size() >= 2) fit = c2m::fit_line(xs, ys);

  if (json) {
    nlohmann::json j;
    j["files"] = nlohmann::json::array();
    for (const auto& s : stats) {
      nlohmann::json f;
      f["file"] = s.file;
      f["loc"] = s.loc;
      f["lom"] = s.lom;
      f["ratio"] = s.loc ? double(s.lom) / s.loc : 0.0;
      f["src_nodes"] = s.src_nodes;
      f["out_nodes"] = s.out_nodes;
      f["millis"] = s.millis;
      j["files"].push_back(f);
    }
    if (stats.size() >= 2) {
      j["fit"] = {{"a", fit.a}, {"b", fit.b}, {"r2", fit.r2}};
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "file\tloc\tlom\tratio\tsrc_nodes\tout_nodes\tms\n";
    for (const auto& s : stats) {
      std::cout << s.file << "\t" << s.loc << "\t" << s.lom << "\t"
                << (s.loc ? double(s.lom) / s.loc : 0.0) << "\t"
                << s.src_nodes << "\t" << s.out_nodes << "\t" << s.millis
                << "\n";
    }
    if (stats.size() >= 2)
      std::cout << "fit: out = " << fit.a << " + " << fit.b
                << " * src (r2 = " << fit.r2 << ")\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-subset to temporal-logic translator and differential runner"};
  app.require_subcommand(1);

  int64_t fuel = default_fuel();
  std::string externs;
  bool canonical = true;
  bool json = false;

  std::string tr_file;
  auto* tr = app.add_subcommand("translate", "translate a C file");
  tr->add_option("file", tr_file, "input C file")->required();
  tr->add_flag("--canonical,!--no-canonical", canonical,
               "canonical formatting of the output");
  tr->add_flag("--json", json, "machine-readable output");

  std::string run_file;
  auto* rn = app.add_subcommand("run", "run a C (.c) or translated program");
  rn->add_option("file", run_file, "input file")->required();
  rn->add_option("--fuel", fuel, "step budget");
  rn->add_option("--externs", externs, "external-call script (JSON)");
  rn->add_flag("--json", json, "machine-readable output");

  std::string diff_file;
  auto* df = app.add_subcommand("diff", "translate and compare both runs");
  df->add_option("file", diff_file, "input C file")->required();
  df->add_option("--fuel", fuel, "step budget");
  df->add_option("--externs", externs, "external-call script (JSON)");
  df->add_flag("--json", json, "machine-readable output");

  std::vector<std::string> stat_files;
  auto* st = app.add_subcommand("stats", "translation size and time metrics");
  st->add_option("files", stat_files, "input C files")->required();
  st->add_flag("--json", json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kInput : kOk;
  }

  try {
    if (tr->parsed()) return cmd_translate(tr_file, canonical, json);
    if (rn->parsed()) return cmd_run(run_file, fuel, externs, json);
    if (df->parsed()) return cmd_diff(diff_file, fuel, externs, json);
    if (st->parsed()) return cmd_stats(stat_files, json);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
