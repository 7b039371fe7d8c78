// Acceptance gate: end-to-end checks over the bundled fixtures plus the
// randomized property suites. Run with the tests directory as argv[1].

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "c2m/equiv.hpp"
#include "c2m/externs.hpp"
#include "c2m/msvl_ast.hpp"
#include "c2m/msvl_interp.hpp"
#include "c2m/stats.hpp"
#include "c2m/translator.hpp"
#include "c2m/xdc_frontend.hpp"
#include "c2m/xdc_interp.hpp"

namespace fs = std::filesystem;
using namespace c2m;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
std::string current;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cout << "  FAIL [" << current << "] " << what << "\n";
  }
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> sorted_dirs(const fs::path& root) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> translate_text(const std::string& src) {
  DiagnosticSink sink;
  return translate_source(src, "input.c", sink, /*canonical=*/true);
}

// Merge rule counters from one run into the global coverage map.
void merge(std::map<std::string, int64_t>& into,
           const std::map<std::string, int64_t>& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

}  // namespace

// ---------------------------------------------------------------------------
// 1. Golden translations
// ---------------------------------------------------------------------------

void criterion_golden(const fs::path& tests) {
  current = "golden translations";
  auto t0 = Clock::now();
  int seen = 0;
  for (const auto& d : sorted_dirs(tests / "golden")) {
    if (d.filename() == "mtf") continue;  // covered by criterion 2
    ++seen;
    auto out = translate_text(slurp(d / "input.c"));
    check(out.has_value(), d.filename().string() + ": translation failed");
    if (out)
      check(*out == slurp(d / "expected.m"),
            d.filename().string() + ": emission differs from the golden file");
  }
  check(seen == 8, "expected eight golden fixtures, found " +
                       std::to_string(seen));
  check(seconds_since(t0) < 1.0, "golden suite exceeded 1 s");
}

// ---------------------------------------------------------------------------
// 2. Move-to-front end to end
// ---------------------------------------------------------------------------

void criterion_mtf(const fs::path& tests) {
  current = "mtf end to end";
  fs::path d = tests / "golden" / "mtf";
  std::string src = slurp(d / "input.c");
  auto out = translate_text(src);
  check(out.has_value(), "translation failed");
  if (!out) return;
  check(*out == slurp(d / "expected.m"), "emission differs from the golden file");
  // Structural skeleton of the translated routine.
  check(out->find("function generateMTFValues() {") != std::string::npos,
        "missing function header");
  check(out->find("while (ll_i != tmp) {") != std::string::npos,
        "missing inner while");
  check(out->find("if (j = 0) then {") != std::string::npos,
        "missing equality test");
  check(out->find("ext record(j) and skip") != std::string::npos,
        "missing external call");
  EquivVerdict v = differential_run(src, "input.c", "{}", 1000000);
  check(v.k == EquivVerdict::K::Equivalent, "differential run: " + v.to_string());
}

// ---------------------------------------------------------------------------
// 3. Differential corpus with full statement-rule coverage
// ---------------------------------------------------------------------------

void criterion_corpus(const fs::path& tests,
                      std::map<std::string, int64_t>& coverage) {
  current = "differential corpus";
  auto t0 = Clock::now();
  int passed = 0;
  for (const auto& d : sorted_dirs(tests / "cases")) {
    std::string src = slurp(d / "input.c");
    std::string want = slurp(d / "expected.verdict");
    while (!want.empty() && (want.back() == '\n' || want.back() == ' '))
      want.pop_back();
    std::string ext = "{}";
    if (fs::exists(d / "externs.json")) ext = slurp(d / "externs.json");
    std::map<std::string, int64_t> counts;
    EquivVerdict v =
        differential_run(src, "input.c", ext, 1000000, nullptr, nullptr, &counts);
    merge(coverage, counts);
    bool ok = (want == "equivalent" && v.k == EquivVerdict::K::Equivalent) ||
              (want == "both-timeout" && v.k == EquivVerdict::K::BothTimeout);
    check(ok, d.filename().string() + ": got " + v.to_string() + ", want " + want);
    if (ok) ++passed;
  }
  check(passed >= 60, "corpus has " + std::to_string(passed) +
                          " passing programs, need at least 60");
  for (int i = 1; i <= 26; ++i) {
    std::string key = "T" + std::to_string(i);
    check(coverage[key] > 0, "statement rule " + key + " never exercised");
  }
  double dt = seconds_since(t0);
  std::cout << "  corpus: " << passed << " programs in " << dt << " s\n";
  check(dt < 60.0, "corpus exceeded 60 s");
}

// ---------------------------------------------------------------------------
// 4. Randomized expression equivalence
// ---------------------------------------------------------------------------

namespace exprgen {

std::mt19937 rng(20260826);

int irand(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random strictly-typed int expression over x, y, z. Division and shift
// operands are constrained so evaluation is total.
std::string gen(int depth) {
  if (depth <= 0) {
    switch (irand(0, 3)) {
      case 0: return "x";
      case 1: return "y";
      case 2: return "z";
      default: return std::to_string(irand(-20, 20));
    }
  }
  switch (irand(0, 9)) {
    case 0: return "(- " + gen(depth - 1) + ")";
    case 1: return "(!" + gen(depth - 1) + ")";
    case 2: return "(~" + gen(depth - 1) + ")";
    case 3: {
      static const char* ops[] = {"+", "-", "*", "&", "|", "^"};
      return "(" + gen(depth - 1) + " " + ops[irand(0, 5)] + " " +
             gen(depth - 1) + ")";
    }
    case 4: {  // nonzero literal divisor keeps the evaluation total
      static const char* ops[] = {"/", "%"};
      int d = irand(1, 9);
      return "(" + gen(depth - 1) + " " + ops[irand(0, 1)] + " " +
             std::to_string(irand(0, 1) ? d : -d) + ")";
    }
    case 5: {
      static const char* ops[] = {"<<", ">>"};
      return "(" + gen(depth - 1) + " " + ops[irand(0, 1)] + " " +
             std::to_string(irand(0, 12)) + ")";
    }
    case 6: {
      static const char* ops[] = {"<", ">", "<=", ">=", "==", "!="};
      return "(" + gen(depth - 1) + " " + ops[irand(0, 5)] + " " +
             gen(depth - 1) + ")";
    }
    case 7: {
      static const char* ops[] = {"&&", "||"};
      return "(" + gen(depth - 1) + " " + ops[irand(0, 1)] + " " +
             gen(depth - 1) + ")";
    }
    default:
      return "(" + gen(depth - 1) + " ? " + gen(depth - 1) + " : " +
             gen(depth - 1) + ")";
  }
}

}  // namespace exprgen

void criterion_expressions() {
  current = "random expression equivalence";
  auto t0 = Clock::now();
  const int kRuns = 10000;
  int agreed = 0;
  xdc::TypePtr int_t = xdc::make_type(xdc::TypeKind::Int);
  msvl::Program empty_m;
  for (int n = 0; n < kRuns; ++n) {
    std::string e = exprgen::gen(exprgen::irand(1, 4));
    std::string src =
        "int x;\nint y;\nint z;\nint main() { return " + e + "; }\n";
    DiagnosticSink sink;
    auto p = xdc::analyze(src, "gen.c", sink);
    check(p.has_value(), "generator produced a rejected expression: " + e);
    if (!p) continue;

    Value vx = Value::int_v(exprgen::irand(-100, 100));
    Value vy = Value::int_v(exprgen::irand(-100, 100));
    Value vz = Value::int_v(exprgen::irand(-100, 100));

    xdc::Interpreter ci(*p, ExternEnv::from_json("{}"));
    ci.bind_global("x", int_t, vx);
    ci.bind_global("y", int_t, vy);
    ci.bind_global("z", int_t, vz);
    const xdc::FuncDef* mainf = p->find_func("main");
    const xdc::ExprPtr& ce = mainf->body.front()->expr;
    Value cv;
    std::string cerr_msg;
    bool cok = ci.eval_rvalue(ce, &cv, &cerr_msg);

    Translator tr(*p);
    msvl::ExprPtr me = tr.ex_tr(ce);
    msvl::Interpreter mi(empty_m, ExternEnv::from_json("{}"));
    mi.bind_var("x", int_t, vx);
    mi.bind_var("y", int_t, vy);
    mi.bind_var("z", int_t, vz);
    Value mv;
    std::string merr;
    bool mok = mi.eval_right(me, &mv, &merr);

    bool same = (cok == mok) && (!cok || cv.same_as(mv));
    if (same) ++agreed;
    else
      check(false, "disagreement on " + e + ": " +
                       (cok ? cv.show() : "error(" + cerr_msg + ")") + " vs " +
                       (mok ? mv.show() : "error(" + merr + ")"));
  }
  std::cout << "  expressions: " << agreed << "/" << kRuns << " agreed in "
            << seconds_since(t0) << " s\n";
  check(agreed == kRuns, "expression oracle found disagreements");
  check(seconds_since(t0) < 30.0, "expression suite exceeded 30 s");
}

// ---------------------------------------------------------------------------
// 5. Per-rule coverage (corpus plus direct probes)
// ---------------------------------------------------------------------------

void criterion_rule_coverage(std::map<std::string, int64_t>& coverage) {
  current = "rule coverage";
  // Direct probes for the rules the translator never emits.
  auto run_m = [&](const std::string& src, const std::string& ext = "{}",
                   int64_t fuel = 10000) {
    DiagnosticSink sink;
    auto p = msvl::parse_msvl(src, "probe.m", sink);
    check(p.has_value(), "probe failed to parse: " + src);
    if (!p) return;
    auto rr = msvl::Interpreter(*p, ExternEnv::from_json(ext), fuel).run();
    merge(coverage, rr.rule_counts);
  };
  auto run_c = [&](const std::string& src) {
    DiagnosticSink sink;
    auto p = xdc::analyze(src, "probe.c", sink);
    check(p.has_value(), "probe failed to analyze: " + src);
    if (!p) return;
    auto rr = xdc::Interpreter(*p, ExternEnv::from_json("{}"), 10000).run();
    merge(coverage, rr.rule_counts);
  };

  run_m("int x and skip;\n"
        "if (true) then { x <== 1 and empty } else { empty };\n"
        "if (false) then { empty } else { x := 2 }");           // B1 B2
  run_m("int x <== 1 and skip;\nx := prev(x) + 1");             // R9
  run_m("int x and x <== 1 and skip;\nx := 2");                 // CHOP1
  run_m("int x <== 1 and empty;\nx := 2");                      // CHOP3
  run_m("int x <== 1 and skip;\nalw { more };\nempty", "{}", 16);  // CHOP4
  run_m("int x and alw { x <== 1 } and skip");                  // ALW1 ALW2
  run_m("int x <== 0 and skip and next { x <== 1 and empty }"); // NEXT
  run_m("function setv(int n) {\n    y := n\n};\n"
        "int y <== 0 and skip;\next setv(4);\nskip");           // EXT1
  run_m("int x <== 3 and skip;\next mfree(x);\nskip");          // EXT3
  run_c("int m[2][2];\nint main() { m[1][0] = 3; return m[1][0]; }");  // C14
  run_c(R"(
int main() {
    float a;
    double d;
    int r;
    a = (float) 1.5;
    d = 2.5;
    r = (int) (a + a) + (int) (d + d);
    return r;
}
)");  // float and double addition rows

  static const char* required[] = {
      // Source-side expression and statement rules.
      "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11",
      "C12", "C13", "C14", "C15",
      "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "T11",
      "T12", "T13", "T14", "T15", "T16", "T17", "T18", "T19", "T20", "T21",
      "T22", "T23", "T24", "T25", "T26",
      // Target-side evaluation rules.
      "L1", "L2", "L3", "L4", "L5", "L6",
      "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10", "R11",
      "B1", "B2", "B3", "B4", "B5", "B6",
      // Target-side statement and transition rules.
      "SKIP", "UASS", "AND", "NEXT", "ALW1", "ALW2",
      "CHOP1", "CHOP2", "CHOP3", "CHOP4",
      "IF", "WHL", "MIN1", "MIN2", "TR1", "TR2",
      "FUN", "EXT1", "EXT2", "EXT3",
  };
  for (const char* key : required)
    check(coverage[key] > 0, std::string("rule ") + key + " never exercised");
}

// ---------------------------------------------------------------------------
// 6. Pointer offset law
// ---------------------------------------------------------------------------

void criterion_pointer_law() {
  current = "pointer offset law";
  std::mt19937 rng(7);
  auto ri = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  int violations = 0;
  for (int n = 0; n < 10000; ++n) {
    int32_t b = ri(1, 1 << 20);
    int32_t bp = ri(1 << 20, 1 << 21);
    int32_t delta = ri(-4096, 4096);
    int32_t i = ri(-100000, 100000);
    MemoryInjection alpha;
    if (!alpha.add(b, bp, delta)) { ++violations; continue; }
    std::string why;
    if (!check_value_equiv(alpha, Value::ptr(b, i), Value::ptr(bp, i + delta),
                           &why))
      ++violations;
    // A shifted offset must be caught.
    int32_t wrong = i + delta + (ri(0, 1) ? 1 : -1);
    if (check_value_equiv(alpha, Value::ptr(b, i), Value::ptr(bp, wrong), &why))
      ++violations;
  }
  check(violations == 0,
        std::to_string(violations) + " violations of the offset law");
}

// ---------------------------------------------------------------------------
// 7. Framing over random translated programs
// ---------------------------------------------------------------------------

namespace proggen {

std::mt19937 rng(424242);

int irand(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

const char* kVars[] = {"a", "b", "c"};

std::string expr() {
  std::string lhs = irand(0, 1) ? kVars[irand(0, 2)]
                                : std::to_string(irand(-9, 9));
  std::string rhs = irand(0, 1) ? kVars[irand(0, 2)]
                                : std::to_string(irand(-9, 9));
  static const char* ops[] = {"+", "-", "*"};
  return lhs + " " + ops[irand(0, 2)] + " " + rhs;
}

std::string stmt(int depth, bool in_loop) {
  // No while inside a while: nested loops would re-zero the shared counter
  // `k` and keep the outer guard from ever advancing.
  switch (irand(0, depth > 0 ? (in_loop ? 2 : 3) : 1)) {
    case 0:
      return std::string(kVars[irand(0, 2)]) + " = " + expr() + ";\n";
    case 1:
      return std::string(kVars[irand(0, 2)]) + "++;\n";
    case 2: {
      std::string s = "if (" + expr() + " < " + std::to_string(irand(-5, 5)) +
                      ") {\n";
      int n = irand(1, 2);
      for (int i = 0; i < n; ++i) s += stmt(depth - 1, in_loop);
      s += "} else {\n" + stmt(depth - 1, in_loop) + "}\n";
      return s;
    }
    default: {
      std::string s = "k = 0;\nwhile (k < " + std::to_string(irand(1, 3)) +
                      ") {\n";
      int n = irand(1, 2);
      for (int i = 0; i < n; ++i) s += stmt(depth - 1, true);
      s += "k = k + 1;\n}\n";
      return s;
    }
  }
}

// A random program with a sentinel variable that is initialized once and
// never reassigned — the direct witness for the framing rule.
std::string program(int* frozen_val) {
  *frozen_val = irand(-50, 50);
  std::string s = "int main() {\n"
                  "int a;\nint b;\nint c;\nint k;\nint frozen;\n"
                  "frozen = " + std::to_string(*frozen_val) + ";\n"
                  "a = " + std::to_string(irand(-9, 9)) + ";\n"
                  "b = " + std::to_string(irand(-9, 9)) + ";\n"
                  "c = " + std::to_string(irand(-9, 9)) + ";\n";
  int n = irand(2, 5);
  for (int i = 0; i < n; ++i) s += stmt(2, false);
  s += "return frozen;\n}\n";
  return s;
}

}  // namespace proggen

void criterion_framing() {
  current = "framing";
  auto t0 = Clock::now();
  const int kRuns = 1000;
  for (int n = 0; n < kRuns; ++n) {
    int frozen;
    std::string src = proggen::program(&frozen);
    DiagnosticSink sink;
    auto m = translate_source(src, "gen.c", sink);
    check(m.has_value(), "random program failed to translate");
    if (!m) continue;
    auto mp = msvl::parse_msvl(*m, "gen.m", sink);
    check(mp.has_value(), "translated program failed to parse");
    if (!mp) continue;
    auto rr =
        msvl::Interpreter(*mp, ExternEnv::from_json("{}"), 100000).run();
    check(rr.k == msvl::RunResult::K::Terminated,
          "translated program did not terminate: " + rr.error);
    if (rr.k != msvl::RunResult::K::Terminated) continue;
    check(rr.rule_counts["MIN2"] > 0, "no framing steps counted");
    // The sentinel is written exactly once; every later state must carry the
    // value forward unchanged.
    bool seen = false;
    for (const auto& s : rr.interval) {
      auto it = s.vals.find("frozen");
      if (it == s.vals.end()) {
        check(!seen, "frozen dropped from a later state");
        continue;
      }
      seen = true;
      check(it->second.is_int() && it->second.i == frozen,
            "frozen changed value: " + it->second.show());
    }
    check(seen, "frozen never appeared in the interval");
  }
  std::cout << "  framing: " << kRuns << " programs in " << seconds_since(t0)
            << " s\n";
}

// ---------------------------------------------------------------------------
// 8. Linear-time translation
// ---------------------------------------------------------------------------

void criterion_linearity() {
  current = "linearity";
  std::vector<double> xs, ys;
  double max_ratio = 0;
  for (int k = 5; k <= 12; ++k) {
    int n = 1 << k;
    std::string src = "int main() {\nint x;\nx = 0;\n";
    for (int i = 0; i < n; ++i) src += "x = x + 1;\n";
    src += "return x;\n}\n";
    DiagnosticSink sink;
    auto p = xdc::analyze(src, "gen.c", sink);
    check(p.has_value(), "synthetic program rejected");
    if (!p) return;
    // Small inputs translate in microseconds; batch enough repetitions per
    // measurement to stay well above timer resolution, then keep the best of
    // three batches to shed scheduling noise.
    int reps = std::max(1, (1 << 14) / n);
    double best = 1e30;
    int out_nodes = 0;
    for (int batch = 0; batch < 3; ++batch) {
      auto t0 = Clock::now();
      for (int rep = 0; rep < reps; ++rep) {
        Translator tr(*p);
        auto m = tr.prgm_tr(sink);
        check(m.has_value(), "synthetic program failed to translate");
        if (!m) return;
        std::string text = msvl::emit(*m);
        out_nodes = msvl::count_nodes(*m);
      }
      best = std::min(best, seconds_since(t0) / reps);
    }
    int in_nodes = xdc::count_nodes(*p);
    max_ratio = std::max(max_ratio, double(out_nodes) / in_nodes);
    xs.push_back(double(in_nodes));
    ys.push_back(best);
  }
  LinearFit fit = fit_line(xs, ys);
  std::cout << "  linearity: r2 = " << fit.r2 << ", max node ratio = "
            << max_ratio << "\n";
  check(fit.r2 > 0.98, "translation time is not linear (r2 = " +
                           std::to_string(fit.r2) + ")");
  check(max_ratio < 10.0, "node growth ratio exceeds the constant bound");
}

// ---------------------------------------------------------------------------
// 9. Expansion ratio over the corpus
// ---------------------------------------------------------------------------

void criterion_expansion(const fs::path& tests) {
  current = "expansion ratio";
  double sum_loc = 0, sum_lom = 0;
  for (const auto& d : sorted_dirs(tests / "cases")) {
    std::string src = slurp(d / "input.c");
    auto m = translate_text(src);
    if (!m) continue;
    sum_loc += count_code_lines(src);
    sum_lom += count_code_lines(*m);
  }
  double ratio = sum_lom / sum_loc;
  std::cout << "  expansion: LOM/LOC = " << ratio << "\n";
  check(ratio >= 1.5 && ratio <= 4.0,
        "aggregate LOM/LOC " + std::to_string(ratio) + " outside [1.5, 4.0]");
}

// ---------------------------------------------------------------------------
// 10. Negative-list gate
// ---------------------------------------------------------------------------

void criterion_negative(const fs::path& tests) {
  current = "negative list";
  int seen = 0;
  for (const auto& e : fs::directory_iterator(tests / "negative")) {
    std::string name = e.path().filename().string();
    if (name.rfind("item-", 0) != 0) continue;
    ++seen;
    int want = std::stoi(name.substr(5, 2));
    DiagnosticSink sink;
    xdc::analyze(slurp(e.path()), name, sink);
    bool hit = false;
    for (const auto& d : sink.diags)
      if (d.severity == Severity::Error && d.item == want) hit = true;
    check(hit, name + ": expected a rejection with item code " +
                   std::to_string(want));
  }
  check(seen == 14, "expected 14 negative fixtures, found " +
                        std::to_string(seen));
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <tests-dir>\n";
    return 2;
  }
  fs::path tests = argv[1];
  std::map<std::string, int64_t> coverage;

  criterion_golden(tests);
  criterion_mtf(tests);
  criterion_corpus(tests, coverage);
  criterion_expressions();
  criterion_rule_coverage(coverage);
  criterion_pointer_law();
  criterion_framing();
  criterion_linearity();
  criterion_expansion(tests);
  criterion_negative(tests);

  if (failures == 0) {
    std::cout << "acceptance: all criteria satisfied\n";
    return 0;
  }
  std::cout << "acceptance: " << failures << " failure(s)\n";
  return 1;
}
