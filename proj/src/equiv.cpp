#include <sstream>

#include <nlohmann/json.hpp>

#include "c2m/equiv.hpp"
#include "c2m/translator.hpp"
#include "c2m/xdc_frontend.hpp"

namespace c2m {

namespace {

// Re-spell a flattened scalar path ("s.f[2]") with the translator's
// identifier mapping applied to every name segment.
std::string map_path(const std::string& path) {
  std::string out;
  size_t i = 0;
  while (i < path.size()) {
    char c = path[i];
    if (c == '[') {
      size_t j = path.find(']', i);
      out += path.substr(i, j - i + 1);
      i = j + 1;
    } else if (c == '.') {
      out += '.';
      ++i;
    } else {
      size_t j = i;
      while (j < path.size() && path[j] != '.' && path[j] != '[') ++j;
      out += mapped_name(path.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

const char* kExcluded[] = {"break", "continue", "return", "switch", "RVal"};

bool is_excluded(const std::string& path) {
  std::string owner = path.substr(0, path.find_first_of(".["));
  for (const char* e : kExcluded)
    if (owner == e) return true;
  return false;
}

std::string describe(const xdc::RunResult& r) {
  switch (r.k) {
    case xdc::RunResult::K::Exit:
      return "exit " + std::to_string(r.exit_code);
    case xdc::RunResult::K::Timeout:
      return "timeout";
    default:
      return "error: " + r.error;
  }
}

std::string describe(const msvl::RunResult& r) {
  switch (r.k) {
    case msvl::RunResult::K::Terminated:
      return "exit " + std::to_string(r.exit_code);
    case msvl::RunResult::K::Timeout:
      return "timeout";
    case msvl::RunResult::K::Infeasible:
      return "infeasible: " + r.error;
    default:
      return "error: " + r.error;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MemoryInjection
// ---------------------------------------------------------------------------

bool MemoryInjection::add(int32_t src_block, int32_t dst_block,
                          int32_t delta) {
  auto f = fwd_.find(src_block);
  if (f != fwd_.end())
    return f->second == std::make_pair(dst_block, delta);
  auto r = rev_.find(dst_block);
  if (r != rev_.end()) return false;  // two sources mapping onto one target
  fwd_[src_block] = {dst_block, delta};
  rev_[dst_block] = src_block;
  return true;
}

std::optional<std::pair<int32_t, int32_t>> MemoryInjection::map(
    int32_t src_block) const {
  auto it = fwd_.find(src_block);
  if (it == fwd_.end()) return std::nullopt;
  return it->second;
}

bool check_value_equiv(const MemoryInjection& alpha, const Value& a,
                       const Value& b, std::string* why) {
  auto no = [&](const std::string& m) {
    if (why) *why = m + " (" + a.show() + " vs " + b.show() + ")";
    return false;
  };
  if (a.is_undef() && b.is_undef()) return true;
  if (a.is_undef() != b.is_undef()) return no("one side undefined");
  if (a.is_ptr() || b.is_ptr()) {
    if (!a.is_ptr() || !b.is_ptr()) return no("pointer vs non-pointer");
    if (a.is_null() && b.is_null()) return true;
    if (a.is_null() != b.is_null()) return no("null vs non-null pointer");
    auto m = alpha.map(a.block);
    if (!m) return no("pointer to an unmapped block");
    if (m->first != b.block) return no("pointers to unrelated blocks");
    if (int64_t(a.off) + m->second != b.off)
      return no("pointer offsets violate the injection law");
    return true;
  }
  if (!a.same_as(b)) return no("values differ");
  return true;
}

std::optional<MemoryInjection> build_injection(const xdc::RunResult& xr,
                                               const msvl::RunResult& mr,
                                               std::string* why) {
  MemoryInjection alpha;
  for (const auto& [name, blk] : xr.var_blocks) {
    std::string mn = mapped_name(name);
    auto it = mr.var_blocks.find(mn);
    if (it == mr.var_blocks.end()) {
      if (why) *why = "variable " + name + " missing on the translated side";
      return std::nullopt;
    }
    if (!alpha.add(blk, it->second, 0)) {
      if (why) *why = "block mapping for " + name + " breaks injectivity";
      return std::nullopt;
    }
  }
  for (const auto& [name, blk] : xr.func_blocks) {
    auto it = mr.func_blocks.find(mapped_name(name));
    // The entry function is inlined by the translation; a function with no
    // block on the translated side only matters if a pointer refers to it,
    // which the per-value check will catch.
    if (it == mr.func_blocks.end()) continue;
    if (!alpha.add(blk, it->second, 0)) {
      if (why) *why = "block mapping for function " + name +
                      " breaks injectivity";
      return std::nullopt;
    }
  }
  return alpha;
}

bool check_state_equiv(const MemoryInjection& alpha, const xdc::RunResult& xr,
                       const msvl::RunResult& mr, std::string* witness) {
  std::map<std::string, const Value*> mvals;
  for (const auto& c : mr.snapshot) mvals[c.path] = &c.value;
  for (const auto& c : xr.snapshot) {
    if (is_excluded(c.path)) continue;
    std::string mp = map_path(c.path);
    auto it = mvals.find(mp);
    const Value* mv = it == mvals.end() ? nullptr : it->second;
    static const Value undef = Value::undef();
    std::string why;
    if (!check_value_equiv(alpha, c.value, mv ? *mv : undef, &why)) {
      if (witness) *witness = c.path + ": " + why;
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Verdict rendering
// ---------------------------------------------------------------------------

std::string EquivVerdict::to_string() const {
  std::string head;
  switch (k) {
    case K::Equivalent: head = "equivalent"; break;
    case K::Mismatch: head = "mismatch"; break;
    case K::BothTimeout: head = "both-timeout"; break;
    case K::VerdictMismatch: head = "verdict-mismatch"; break;
  }
  if (!witness.empty()) head += ": " + witness;
  return head;
}

std::string EquivVerdict::to_json() const {
  nlohmann::json j;
  switch (k) {
    case K::Equivalent: j["verdict"] = "equivalent"; break;
    case K::Mismatch: j["verdict"] = "mismatch"; break;
    case K::BothTimeout: j["verdict"] = "both-timeout"; break;
    case K::VerdictMismatch: j["verdict"] = "verdict-mismatch"; break;
  }
  j["ok"] = ok();
  j["witness"] = witness;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Differential run
// ---------------------------------------------------------------------------

EquivVerdict differential_run(const std::string& c_src,
                              const std::string& file,
                              const std::string& externs_json, int64_t fuel,
                              std::string* translated_out,
                              DiagnosticSink* sink_out,
                              std::map<std::string, int64_t>* rule_counts) {
  EquivVerdict v;
  DiagnosticSink local;
  DiagnosticSink& sink = sink_out ? *sink_out : local;

  auto prog = xdc::analyze(c_src, file, sink);
  if (!prog) {
    v.k = EquivVerdict::K::VerdictMismatch;
    v.witness = "source program rejected";
    return v;
  }
  Translator tr(*prog);
  auto mprog = tr.prgm_tr(sink);
  if (!mprog) {
    v.k = EquivVerdict::K::VerdictMismatch;
    v.witness = "translation failed";
    return v;
  }
  std::string text = msvl::emit(*mprog);
  if (translated_out) *translated_out = text;
  auto reparsed = msvl::parse_msvl(text, file + ".m", sink);
  if (!reparsed) {
    v.k = EquivVerdict::K::VerdictMismatch;
    v.witness = "emitted translation failed to parse";
    return v;
  }

  std::string ext_text = externs_json.empty() ? "{}" : externs_json;
  xdc::Interpreter xi(*prog, ExternEnv::from_json(ext_text), fuel);
  xdc::RunResult xr = xi.run();
  msvl::Interpreter mi(*reparsed, ExternEnv::from_json(ext_text), fuel);
  msvl::RunResult mr = mi.run();

  if (rule_counts) {
    for (const auto& [k2, n] : xr.rule_counts) (*rule_counts)[k2] += n;
    for (const auto& [k2, n] : mr.rule_counts) (*rule_counts)[k2] += n;
  }

  bool x_done = xr.k == xdc::RunResult::K::Exit;
  bool m_done = mr.k == msvl::RunResult::K::Terminated;
  bool x_to = xr.k == xdc::RunResult::K::Timeout;
  bool m_to = mr.k == msvl::RunResult::K::Timeout;

  if (x_to && m_to) {
    // Both budgets exhausted: the observations so far must agree, i.e. one
    // trace is a prefix of the other.
    size_t n = std::min(xr.trace.size(), mr.trace.size());
    for (size_t i = 0; i < n; ++i) {
      if (xr.trace[i].render() != mr.trace[i].render()) {
        v.k = EquivVerdict::K::Mismatch;
        v.witness = "trace event " + std::to_string(i) + ": " +
                    xr.trace[i].render() + " vs " + mr.trace[i].render();
        return v;
      }
    }
    v.k = EquivVerdict::K::BothTimeout;
    return v;
  }
  if (!x_done || !m_done) {
    v.k = EquivVerdict::K::VerdictMismatch;
    v.witness = "source: " + describe(xr) + "; translation: " + describe(mr);
    return v;
  }

  std::string why;
  auto alpha = build_injection(xr, mr, &why);
  if (!alpha) {
    v.k = EquivVerdict::K::Mismatch;
    v.witness = why;
    return v;
  }
  if (xr.exit_code != mr.exit_code) {
    v.k = EquivVerdict::K::Mismatch;
    v.witness = "exit codes differ: " + std::to_string(xr.exit_code) +
                " vs " + std::to_string(mr.exit_code);
    return v;
  }
  if (xr.trace.size() != mr.trace.size()) {
    v.k = EquivVerdict::K::Mismatch;
    v.witness = "trace lengths differ: " + std::to_string(xr.trace.size()) +
                " vs " + std::to_string(mr.trace.size());
    return v;
  }
  for (size_t i = 0; i < xr.trace.size(); ++i) {
    if (xr.trace[i].render() != mr.trace[i].render()) {
      v.k = EquivVerdict::K::Mismatch;
      v.witness = "trace event " + std::to_string(i) + ": " +
                  xr.trace[i].render() + " vs " + mr.trace[i].render();
      return v;
    }
  }
  std::string witness;
  if (!check_state_equiv(*alpha, xr, mr, &witness)) {
    v.k = EquivVerdict::K::Mismatch;
    v.witness = witness;
    return v;
  }
  v.k = EquivVerdict::K::Equivalent;
  return v;
}

}  // namespace c2m
