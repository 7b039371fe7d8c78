#include <doctest.h>

#include <cstdio>
#include <string>

#include "c2m/externs.hpp"
#include "c2m/xdc_frontend.hpp"
#include "c2m/xdc_interp.hpp"

using namespace c2m;
using namespace c2m::xdc;

namespace {

RunResult run_c(const std::string& src, const std::string& externs = "{}",
                int64_t fuel = 1000000) {
  DiagnosticSink sink;
  auto p = analyze(src, "test.c", sink);
  REQUIRE_MESSAGE(p.has_value(), "frontend rejected the program");
  return Interpreter(*p, ExternEnv::from_json(externs), fuel).run();
}

int64_t exit_of(const std::string& src, const std::string& externs = "{}") {
  RunResult rr = run_c(src, externs);
  REQUIRE_MESSAGE(rr.k == RunResult::K::Exit, rr.error);
  return rr.exit_code;
}

bool errors_with(const std::string& src, const std::string& what) {
  RunResult rr = run_c(src);
  return rr.k == RunResult::K::RuntimeError &&
         rr.error.find(what) != std::string::npos;
}

ExprPtr lit_f(double v, TypeKind k) {
  auto e = make_expr(ExprKind::FloatLit, {});
  e->float_val = v;
  e->type = make_type(k);
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// Binary addition, row by row
// ---------------------------------------------------------------------------

TEST_CASE("addition row: int + int") {
  CHECK(exit_of("int main() { return 2 + 3; }") == 5);
  // Wraps two's-complement at 32 bits.
  CHECK(exit_of("int main() { int x; x = 2147483647; x = x + 1; "
                "return x == -2147483647 - 1; }") == 1);
}

TEST_CASE("addition row: float + float") {
  CHECK(exit_of(R"(
int main() {
    float a;
    float b;
    a = (float) 1.5;
    b = (float) 0.25;
    return (int) (a + b) + (a + b == (float) 1.75);
}
)") == 2);
}

TEST_CASE("addition row: double + double") {
  CHECK(exit_of(R"(
int main() {
    double a;
    double b;
    a = 1.25;
    b = 2.5;
    return (int) (a + b);
}
)") == 3);
}

TEST_CASE("addition row: pointer + int scales by the element size") {
  RunResult rr = run_c(R"(
int a[4];
int main() {
    int *p;
    a[2] = 7;
    p = a + 2;
    return *p;
}
)");
  REQUIRE(rr.k == RunResult::K::Exit);
  CHECK(rr.exit_code == 7);
}

TEST_CASE("addition row: int + pointer is symmetric") {
  CHECK(exit_of(R"(
int a[4];
int main() {
    a[2] = 9;
    return *(2 + a);
}
)") == 9);
}

TEST_CASE("addition row: no matching row yields an evaluation error") {
  DiagnosticSink sink;
  auto p = analyze("int main() { return 0; }", "test.c", sink);
  REQUIRE(p.has_value());
  Interpreter in(*p, ExternEnv::from_json("{}"));
  // float + double has no row; there are no implicit promotions.
  auto e = make_expr(ExprKind::Binary, {});
  e->bin_op = BinOp::Add;
  e->kids = {lit_f(1.0, TypeKind::Float), lit_f(2.0, TypeKind::Double)};
  Value out;
  std::string err;
  CHECK_FALSE(in.eval_rvalue(e, &out, &err));
  CHECK_FALSE(err.empty());
}

// ---------------------------------------------------------------------------
// Expression rules
// ---------------------------------------------------------------------------

TEST_CASE("conditional expression takes the live branch only") {
  RunResult rr = run_c(R"(
int main() {
    int x;
    int y;
    x = 1;
    y = x > 0 ? 2 : 3;
    x = x - 1;
    y = y + (x > 0 ? 10 : 20);
    return y;
}
)");
  REQUIRE(rr.k == RunResult::K::Exit);
  CHECK(rr.exit_code == 22);
  CHECK(rr.rule_counts.count("C9"));   // true branch taken
  CHECK(rr.rule_counts.count("C10"));  // false branch taken
}

TEST_CASE("casts convert and truncate") {
  CHECK(exit_of("int main() { char c; c = (char) 300; return (int) c; }") == 44);
  CHECK(exit_of("int main() { return (int) 3.9; }") == 3);
  CHECK(exit_of(
            "int main() { unsigned char u; u = (unsigned char) -1; return (int) u; }") ==
        255);
}

TEST_CASE("multidimensional indexing flattens row by row") {
  CHECK(exit_of(R"(
int m[2][3];
int main() {
    m[0][2] = 5;
    m[1][0] = 6;
    return m[0][2] * 10 + m[1][0];
}
)") == 56);
}

TEST_CASE("arrow access reads through the pointer") {
  CHECK(exit_of(R"(
struct node { int val; };
struct node n;
int main() {
    struct node *p;
    p = &n;
    p->val = 8;
    return p->val;
}
)") == 8);
}

TEST_CASE("pure value calls in expressions are allowed") {
  RunResult rr = run_c(R"(
int sq(int n) {
    return n * n;
}

int main() {
    return sq(3) + sq(4);
}
)");
  REQUIRE(rr.k == RunResult::K::Exit);
  CHECK(rr.exit_code == 25);
  CHECK(rr.rule_counts.count("C12"));
  CHECK(rr.rule_counts.count("T25"));
}

TEST_CASE("impure calls in expression position are rejected at runtime") {
  CHECK(errors_with(R"(
int g;

int f(void) {
    g = g + 1;
    return 1;
}

int main() {
    int x;
    g = 0;
    x = f();
    return x;
}
)",
                    "side effects"));
}

TEST_CASE("a pure call may allocate as long as it frees") {
  // Locals of the callee come and go; the snapshot comparison must not
  // mistake the freed frame for a side effect.
  CHECK(exit_of(R"(
int f(int n) {
    int t;
    t = n + 1;
    return t;
}

int main() {
    int x;
    x = f(4);
    return x;
}
)") == 5);
}

// ---------------------------------------------------------------------------
// Statement rules
// ---------------------------------------------------------------------------

TEST_CASE("statement outcomes: normal, break, continue, return") {
  RunResult rr = run_c(R"(
void f(void) {
    return;
}

int main() {
    int i;
    int s;
    ;
    s = 0;
    f();
    for (i = 0; i < 10; i++) {
        if (i == 2) { continue; } else { ; }
        if (i == 5) { break; } else { ; }
        s = s + i;
    }
    return s;
}
)");
  REQUIRE(rr.k == RunResult::K::Exit);
  CHECK(rr.exit_code == 0 + 1 + 3 + 4);
  CHECK(rr.rule_counts.count("T1"));  // null statement
  CHECK(rr.rule_counts.count("T2"));  // break
  CHECK(rr.rule_counts.count("T3"));  // continue
  CHECK(rr.rule_counts.count("T4"));  // plain return
  CHECK(rr.rule_counts.count("T5"));  // return with value
}

TEST_CASE("do-while runs the body before the test") {
  CHECK(exit_of(
            "int main() { int x; x = 10; do { x = x + 1; } while (x < 5); return x; }") ==
        11);
}

TEST_CASE("switch falls through until break and the default guard matches") {
  const char* tmpl = R"(
int main() {
    int x;
    int r;
    x = %d;
    r = 0;
    switch (x) {
    case 0:
        r = r + 1;
    case 1:
        r = r + 10;
        break;
    default:
        r = r + 100;
        break;
    }
    return r;
}
)";
  char buf[512];
  snprintf(buf, sizeof buf, tmpl, 0);
  CHECK(exit_of(buf) == 11);  // falls from case 0 into case 1
  snprintf(buf, sizeof buf, tmpl, 1);
  CHECK(exit_of(buf) == 10);
  snprintf(buf, sizeof buf, tmpl, 7);
  CHECK(exit_of(buf) == 100);
}

TEST_CASE("recursion terminates with the right value") {
  CHECK(exit_of(R"(
int fact(int n) {
    if (n <= 1) {
        return 1;
    } else {
        ;
    }
    return n * fact(n - 1);
}

int main() {
    return fact(5);
}
)") == 120);
}

TEST_CASE("extern calls consume the script and record the trace") {
  RunResult rr = run_c(R"(
extern int sense(void);

int main() {
    int a;
    int b;
    a = sense();
    b = sense();
    return a * 10 + b;
}
)",
                       R"({"sense": {"returns": [3, 4]}})");
  REQUIRE(rr.k == RunResult::K::Exit);
  CHECK(rr.exit_code == 34);
  REQUIRE(rr.trace.size() == 2);
  CHECK(rr.trace[0].callee == "sense");
  CHECK(rr.trace[0].result.i == 3);
  CHECK(rr.rule_counts.count("T26"));
}

TEST_CASE("fuel exhaustion is a timeout, not an error") {
  RunResult rr = run_c("int main() { while (1) { ; } return 0; }", "{}");
  CHECK(rr.k == RunResult::K::Timeout);
}

// ---------------------------------------------------------------------------
// Memory model
// ---------------------------------------------------------------------------

TEST_CASE("reading an uninitialized variable is an error") {
  CHECK(errors_with("int main() { int x; return x; }", "undefined"));
}

TEST_CASE("division and modulo by zero are errors") {
  CHECK(errors_with("int main() { int x; x = 5; return x / 0; }",
                    "division by zero"));
  CHECK(errors_with("int main() { int x; x = 5; return x % 0; }", "zero"));
}

TEST_CASE("overwriting one byte of a stored pointer tears it") {
  CHECK(errors_with(R"(
int v;
int out;

int main() {
    int *p;
    char *c;
    v = 5;
    p = &v;
    c = (char *) &p;
    c[1] = 9;
    out = *p;
    return out;
}
)",
                    "torn"));
}

TEST_CASE("stores convert to the declared type") {
  // int stored into a char cell truncates to 8 bits on the way in.
  CHECK(exit_of(R"(
char c;
int main() {
    c = (char) 300;
    return (int) c;
}
)") == 44);
  // unsigned short wraps modulo 65536.
  CHECK(exit_of(R"(
unsigned short u;
int main() {
    u = (unsigned short) 65537;
    return (int) u;
}
)") == 1);
}

TEST_CASE("out-of-bounds access is an error") {
  CHECK(errors_with(R"(
int a[2];
int main() {
    int *p;
    p = a + 5;
    return *p;
}
)",
                    ""));
}

TEST_CASE("final snapshot flattens aggregates to scalar paths") {
  RunResult rr = run_c(R"(
struct s { int a; int b; };
struct s v;
int t[2];

int main() {
    v.a = 1;
    v.b = 2;
    t[0] = 3;
    t[1] = 4;
    return 0;
}
)");
  REQUIRE(rr.k == RunResult::K::Exit);
  bool saw_va = false, saw_t1 = false;
  for (const auto& c : rr.snapshot) {
    if (c.path == "v.a") { saw_va = true; CHECK(c.value.i == 1); }
    if (c.path == "t[1]") { saw_t1 = true; CHECK(c.value.i == 4); }
  }
  CHECK(saw_va);
  CHECK(saw_t1);
}

TEST_CASE("pointer comparisons work within one block") {
  CHECK(exit_of(R"(
int a[4];
int main() {
    int *p;
    int *q;
    p = a;
    q = a + 3;
    return (p < q) + (p != q) * 10;
}
)") == 11);
}
