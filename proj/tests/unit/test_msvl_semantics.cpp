#include <doctest.h>

#include <map>
#include <string>

#include "c2m/externs.hpp"
#include "c2m/msvl_ast.hpp"
#include "c2m/msvl_interp.hpp"

using namespace c2m;
using namespace c2m::msvl;

namespace {

RunResult run_m(const std::string& src, const std::string& externs = "{}",
                int64_t fuel = 100000) {
  DiagnosticSink sink;
  auto p = parse_msvl(src, "test.m", sink);
  REQUIRE_MESSAGE(p.has_value(), "parse failed");
  return Interpreter(*p, ExternEnv::from_json(externs), fuel).run();
}

RunResult run_ok(const std::string& src, const std::string& externs = "{}") {
  RunResult rr = run_m(src, externs);
  REQUIRE_MESSAGE(rr.k == RunResult::K::Terminated, rr.error);
  return rr;
}

Value cell(const RunResult& rr, const std::string& path) {
  for (const auto& c : rr.snapshot)
    if (c.path == path) return c.value;
  return Value::undef();
}

int64_t rule(const RunResult& rr, const std::string& key) {
  auto it = rr.rule_counts.find(key);
  return it == rr.rule_counts.end() ? 0 : it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Interval contracts
// ---------------------------------------------------------------------------

TEST_CASE("unit assignment takes one time unit: interval length 2") {
  RunResult rr = run_ok("int x and x := 5");
  CHECK(rr.interval.size() == 2);       // s_0 (assign issued), s_1 (final)
  CHECK(cell(rr, "x").i == 5);
  CHECK(rule(rr, "UASS") >= 1);
  // The value lands at the next state, not the current one.
  CHECK(rr.interval[0].vals.count("x") == 0);
  REQUIRE(rr.interval[1].vals.count("x") == 1);
  CHECK(rr.interval[1].vals.at("x").i == 5);
}

TEST_CASE("final configuration: terminated, no residue, |sigma|+1 states") {
  // One skip and three unit assignments: sigma has 4 transitions, 5 states.
  RunResult rr = run_ok("int x <== 0 and skip;\nx := 1;\nx := 2;\nx := 3");
  CHECK(rr.interval.size() == 5);
  CHECK(rr.error.empty());
  CHECK(cell(rr, "x").i == 3);
  CHECK(rule(rr, "TR1") == 4);  // one per internal transition
  CHECK(rule(rr, "TR2") == 1);  // the terminating reduction
}

TEST_CASE("empty terminates at the current state") {
  RunResult rr = run_ok("int x <== 1 and empty");
  CHECK(rr.interval.size() == 1);
  CHECK(cell(rr, "x").i == 1);
}

TEST_CASE("skip is an interval of exactly one time unit") {
  RunResult rr = run_ok("int x <== 1 and skip");
  CHECK(rr.interval.size() == 2);
  CHECK(rule(rr, "SKIP") == 1);
}

TEST_CASE("a contradictory state formula is infeasible") {
  RunResult rr = run_m("int x and x <== 1 and x <== 2 and empty");
  CHECK(rr.k == RunResult::K::Infeasible);
}

TEST_CASE("fuel exhaustion reports a timeout") {
  RunResult rr = run_m("int x <== 0 and skip;\nwhile (x = 0) { skip }", "{}");
  CHECK(rr.k == RunResult::K::Timeout);
}

// ---------------------------------------------------------------------------
// Statement rules (state reduction)
// ---------------------------------------------------------------------------

TEST_CASE("AND evaluates every conjunct at the current state") {
  RunResult rr = run_ok("int x and int y and x <== 1 and y <== 2 and empty");
  CHECK(cell(rr, "x").i == 1);
  CHECK(cell(rr, "y").i == 2);
  CHECK(rule(rr, "AND") >= 1);
}

TEST_CASE("NEXT arms its body for the following state") {
  RunResult rr = run_ok("int x <== 0 and skip and next { x <== 1 and empty }");
  CHECK(rr.interval.size() == 2);
  CHECK(cell(rr, "x").i == 1);
  CHECK(rule(rr, "NEXT") == 1);
}

TEST_CASE("ALW holds at every state and is re-armed across transitions") {
  RunResult rr = run_ok("int x and alw { x <== 1 } and skip");
  CHECK(rr.interval.size() == 2);
  // The body held at both states.
  CHECK(rr.interval[0].vals.at("x").i == 1);
  CHECK(rr.interval[1].vals.at("x").i == 1);
  CHECK(rule(rr, "ALW1") >= 1);
  CHECK(rule(rr, "ALW2") >= 1);
}

TEST_CASE("CHOP1: a discharged state formula rides along with the next part") {
  RunResult rr = run_ok("int x and x <== 1 and skip;\nx := 2");
  CHECK(cell(rr, "x").i == 2);
  CHECK(rr.interval[0].vals.at("x").i == 1);
  CHECK(rule(rr, "CHOP1") >= 1);
}

TEST_CASE("CHOP2: a purely temporal head defers the tail") {
  RunResult rr = run_ok("int x <== 0 and skip;\nskip;\nx := 2");
  CHECK(cell(rr, "x").i == 2);
  CHECK(rule(rr, "CHOP2") >= 1);
}

TEST_CASE("CHOP3: a head ending now hands over within the same state") {
  RunResult rr = run_ok("int x <== 1 and empty;\nx := 2");
  CHECK(rr.interval.size() == 2);
  CHECK(cell(rr, "x").i == 2);
  CHECK(rule(rr, "CHOP3") >= 1);
}

TEST_CASE("CHOP4: an infinite head swallows the continuation (weak chop)") {
  RunResult rr = run_m("int x <== 1 and skip;\nalw { more };\nx := 2", "{}", 64);
  CHECK(rr.k == RunResult::K::Timeout);  // the head never ends
  CHECK(rule(rr, "CHOP4") >= 1);
}

TEST_CASE("IF selects a branch by the present-state condition") {
  RunResult rr = run_ok(
      "int x and skip;\n"
      "if (true) then { x <== 1 and empty } else { empty };\n"
      "if (false) then { empty } else { x := 9 }");
  CHECK(cell(rr, "x").i == 9);
  CHECK(rule(rr, "IF") == 2);
  CHECK(rule(rr, "B1") == 1);
  CHECK(rule(rr, "B2") == 1);
}

TEST_CASE("WHL unrolls while the condition holds") {
  RunResult rr = run_ok(
      "int i <== 0 and skip;\nwhile (i < 3) { i := i + 1 }");
  CHECK(cell(rr, "i").i == 3);
  CHECK(rule(rr, "WHL") >= 4);  // three iterations plus the exit test
}

// ---------------------------------------------------------------------------
// Minimal-model framing
// ---------------------------------------------------------------------------

TEST_CASE("MIN1: present assignments discharge within the state") {
  RunResult rr = run_ok("int x and x <== 4 and empty");
  CHECK(cell(rr, "x").i == 4);
  CHECK(rule(rr, "MIN1") >= 1);
}

TEST_CASE("MIN1 is order independent") {
  // y reads x assigned in the same state; conjunct order must not matter.
  RunResult a = run_ok(
      "int x and int y and x <== 1 and y <== x + 1 and empty");
  RunResult b = run_ok(
      "int y and int x and y <== x + 1 and x <== 1 and empty");
  CHECK(cell(a, "x").i == 1);
  CHECK(cell(a, "y").i == 2);
  CHECK(cell(b, "x").i == cell(a, "x").i);
  CHECK(cell(b, "y").i == cell(a, "y").i);
}

TEST_CASE("MIN2: an unassigned variable keeps its previous value") {
  RunResult rr = run_ok("int x <== 5 and int y <== 1 and skip;\ny := 2");
  CHECK(cell(rr, "x").i == 5);  // framed across both transitions
  CHECK(cell(rr, "y").i == 2);
  CHECK(rule(rr, "MIN2") >= 1);
  // Every state carries x = 5.
  for (const auto& s : rr.interval) {
    REQUIRE(s.vals.count("x") == 1);
    CHECK(s.vals.at("x").i == 5);
  }
}

TEST_CASE("an undetermined value at transition time is an error") {
  RunResult rr = run_m("int x and int y and y := x + 1");
  CHECK(rr.k == RunResult::K::RuntimeError);
  CHECK(rr.error.find("undetermined") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Left-value rules
// ---------------------------------------------------------------------------

TEST_CASE("L1-L6: variables, indexing, fields, arrows and dereference") {
  RunResult rr = run_ok(R"(
struct node {
    int val and
    int aux
};
struct node n and skip;
struct node *p and skip;
int a[2][2] and skip;
int x and skip;
n.val := 3;
p := &n;
p->aux := 7;
*(&x) := 5;
a[1][0] := 9;
x := x + a[1][0] + n.val + p->aux
)");
  CHECK(cell(rr, "x").i == 24);
  CHECK(cell(rr, "n.val").i == 3);
  CHECK(cell(rr, "n.aux").i == 7);
  CHECK(cell(rr, "a[1][0]").i == 9);
  CHECK(rule(rr, "L1") >= 1);
  CHECK(rule(rr, "L2") >= 1);
  CHECK(rule(rr, "L3") >= 1);
  CHECK(rule(rr, "L4") >= 1);
  CHECK(rule(rr, "L5") >= 1);
  CHECK(rule(rr, "L6") >= 1);
}

// ---------------------------------------------------------------------------
// Right-value rules
// ---------------------------------------------------------------------------

TEST_CASE("R1-R6: literals, reads, address-of, cast, unary, binary") {
  RunResult rr = run_ok(
      "int x and double d and skip and skip;\n"
      "d := 2.75;\n"
      "x := (int) d + (-2) + (!0) + (~ -1)");
  CHECK(cell(rr, "x").i == 1);
  CHECK(rule(rr, "R1") >= 1);
  CHECK(rule(rr, "R2") >= 1);
  CHECK(rule(rr, "R4") >= 1);
  CHECK(rule(rr, "R5") >= 1);
  CHECK(rule(rr, "R6") >= 1);
}

TEST_CASE("R3: address-of produces a pointer into the variable's block") {
  RunResult rr = run_ok("int v <== 6 and int *p and p <== &v and skip");
  CHECK(cell(rr, "p").is_ptr());
  CHECK(rule(rr, "R3") >= 1);
}

TEST_CASE("R7/R8: conditional expressions take the matching arm") {
  RunResult rr = run_ok(
      "int x <== 3 and skip;\n"
      "int y and int z and skip and skip;\n"
      "y := if (x > 0) then 1 else 2;\n"
      "z := if (x < 0) then 1 else 2");
  CHECK(cell(rr, "y").i == 1);
  CHECK(cell(rr, "z").i == 2);
  CHECK(rule(rr, "R7") == 1);
  CHECK(rule(rr, "R8") == 1);
}

TEST_CASE("R9: prev reads the previous state") {
  RunResult rr = run_ok("int x <== 1 and skip;\nx := prev(x) + 1");
  CHECK(cell(rr, "x").i == 2);
  CHECK(rule(rr, "R9") == 1);
}

TEST_CASE("R10: a defined function called for its value runs on the side") {
  RunResult rr = run_ok(R"(
function twice(int a, int RVal) {
    RVal := a + a
};
int RVal <== 0 and skip;
int x and skip;
x := ext twice(4, RVal);
skip
)");
  CHECK(cell(rr, "x").i == 8);
  // The side interval is discarded: RVal at the main level is untouched.
  CHECK(cell(rr, "RVal").i == 0);
  CHECK(rule(rr, "R10") == 1);
}

TEST_CASE("R11: an external call in value position returns the scripted value") {
  RunResult rr = run_ok("int x and skip;\nx := ext sense()",
                        R"({"sense": {"returns": [42]}})");
  CHECK(cell(rr, "x").i == 42);
  CHECK(rule(rr, "R11") == 1);
  REQUIRE(rr.trace.size() == 1);
  CHECK(rr.trace[0].callee == "sense");
}

// ---------------------------------------------------------------------------
// Boolean rules
// ---------------------------------------------------------------------------

TEST_CASE("B3-B6: comparisons, negation and total connectives") {
  RunResult rr = run_ok(
      "int x <== 2 and skip;\n"
      "int y and skip;\n"
      "if (!(x = 1) and (x > 0 or x > 99)) then { y := 1 } else { y := 0 }");
  CHECK(cell(rr, "y").i == 1);
  CHECK(rule(rr, "B3") >= 1);   // relational atom
  CHECK(rule(rr, "B4") >= 1);   // negation
  CHECK(rule(rr, "B5") >= 1);   // conjunction
  CHECK(rule(rr, "B6") >= 1);   // disjunction
}

TEST_CASE("connectives evaluate both sides (total evaluation)") {
  // The right operand is false but well defined; no short-circuit semantics.
  RunResult rr = run_ok(
      "int x <== 1 and skip;\n"
      "int y and skip;\n"
      "if ((x = 1) or (x = 2)) then { y := 7 } else { y := 0 }");
  CHECK(cell(rr, "y").i == 7);
}

// ---------------------------------------------------------------------------
// Function rules
// ---------------------------------------------------------------------------

TEST_CASE("FUN: a call statement expands inline in the main interval") {
  RunResult rr = run_ok(R"(
function bump() {
    g := g + 1
};
int g <== 0 and skip;
bump();
bump();
skip
)");
  CHECK(cell(rr, "g").i == 2);
  CHECK(rule(rr, "FUN") == 2);
}

TEST_CASE("FUN: parameters are fresh per activation") {
  RunResult rr = run_ok(R"(
function setv(int n, int RVal) {
    RVal := n
};
int RVal <== 0 and skip;
int a and int b and skip and skip;
a := ext setv(3, RVal);
b := ext setv(8, RVal);
skip
)");
  CHECK(cell(rr, "a").i == 3);
  CHECK(cell(rr, "b").i == 8);
}

TEST_CASE("EXT1: calling a defined function by ext splices its final state") {
  RunResult rr = run_ok(R"(
function setv(int n) {
    y := n
};
int y <== 0 and skip;
ext setv(4);
skip
)");
  CHECK(cell(rr, "y").i == 4);
  CHECK(rule(rr, "EXT1") == 1);
}

TEST_CASE("EXT2: external effects apply when the transition commits") {
  RunResult rr = run_ok(
      "int x <== 0 and skip;\next ping(x);\nskip",
      R"({"ping": {"returns": [0], "event": true}})");
  REQUIRE(rr.trace.size() == 1);
  CHECK(rr.trace[0].callee == "ping");
  REQUIRE(rr.trace[0].args.size() == 1);
  CHECK(rr.trace[0].args[0].i == 0);
  CHECK(rule(rr, "EXT2") == 1);
}

TEST_CASE("EXT3: mfree removes the variable from subsequent states") {
  RunResult rr = run_ok("int x <== 3 and skip;\next mfree(x);\nskip");
  CHECK(cell(rr, "x").is_undef());
  for (const auto& c : rr.snapshot) CHECK(c.path != "x");
  CHECK(rule(rr, "EXT3") == 1);
}

// ---------------------------------------------------------------------------
// Evaluation hooks
// ---------------------------------------------------------------------------

TEST_CASE("eval_right and eval_bool work against a prepared state") {
  Program p;  // no program needed for the expression hooks
  Interpreter in(p, ExternEnv::from_json("{}"));
  in.bind_var("x", xdc::make_type(xdc::TypeKind::Int), Value::int_v(3));
  Value out;
  std::string err;
  REQUIRE(in.eval_right(binary(BinOp::Add, var("x"), int_lit(4)), &out, &err));
  CHECK(out.i == 7);
  bool b = false;
  REQUIRE(in.eval_bool(binary(BinOp::Gt, var("x"), int_lit(2)), &b, &err));
  CHECK(b);
  REQUIRE(in.eval_bool(binary(BinOp::Eq, var("x"), int_lit(9)), &b, &err));
  CHECK_FALSE(b);
}
