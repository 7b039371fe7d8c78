#include <doctest.h>

#include <string>

#include "c2m/equiv.hpp"

using namespace c2m;

TEST_CASE("memory injection is an injective partial map") {
  MemoryInjection alpha;
  CHECK(alpha.add(1, 10, 0));
  CHECK(alpha.add(2, 20, 8));
  CHECK(alpha.size() == 2);
  REQUIRE(alpha.map(2).has_value());
  CHECK(alpha.map(2)->first == 20);
  CHECK(alpha.map(2)->second == 8);
  CHECK_FALSE(alpha.map(3).has_value());
  // Re-adding the same pair is idempotent; conflicting pairs are rejected.
  CHECK(alpha.add(1, 10, 0));
  CHECK_FALSE(alpha.add(1, 11, 0));   // source remapped
  CHECK_FALSE(alpha.add(3, 10, 0));   // target reused
}

TEST_CASE("value equivalence: scalars compare exactly") {
  MemoryInjection alpha;
  std::string why;
  CHECK(check_value_equiv(alpha, Value::int_v(5), Value::int_v(5), &why));
  CHECK_FALSE(check_value_equiv(alpha, Value::int_v(5), Value::int_v(6), &why));
  CHECK(check_value_equiv(alpha, Value::f64(1.5), Value::f64(1.5), &why));
  CHECK(check_value_equiv(alpha, Value::undef(), Value::undef(), &why));
  CHECK_FALSE(check_value_equiv(alpha, Value::undef(), Value::int_v(0), &why));
  CHECK_FALSE(check_value_equiv(alpha, Value::int_v(0), Value::ptr(1, 0), &why));
}

TEST_CASE("value equivalence: pointers obey the offset law") {
  MemoryInjection alpha;
  REQUIRE(alpha.add(7, 70, 12));
  std::string why;
  // i' = i + delta
  CHECK(check_value_equiv(alpha, Value::ptr(7, 4), Value::ptr(70, 16), &why));
  CHECK_FALSE(check_value_equiv(alpha, Value::ptr(7, 4), Value::ptr(70, 4), &why));
  CHECK_FALSE(check_value_equiv(alpha, Value::ptr(7, 4), Value::ptr(71, 16), &why));
  // Unmapped blocks cannot be declared equivalent.
  CHECK_FALSE(check_value_equiv(alpha, Value::ptr(8, 0), Value::ptr(80, 0), &why));
  // Null corresponds to null without a mapping.
  CHECK(check_value_equiv(alpha, Value::null_ptr(), Value::null_ptr(), &why));
}

TEST_CASE("state equivalence ignores the control-flag auxiliaries") {
  MemoryInjection alpha;
  xdc::RunResult xr;
  msvl::RunResult mr;
  xr.snapshot.push_back({"x", Value::int_v(3), 1, 0});
  mr.snapshot.push_back({"x", Value::int_v(3), 10, 0});
  // The translated side also carries the auxiliaries; they must not count.
  mr.snapshot.push_back({"break", Value::int_v(0), 11, 0});
  mr.snapshot.push_back({"RVal", Value::int_v(99), 12, 0});
  REQUIRE(alpha.add(1, 10, 0));
  std::string witness;
  CHECK(check_state_equiv(alpha, xr, mr, &witness));
  // A real variable differing is a mismatch.
  mr.snapshot[0].value = Value::int_v(4);
  CHECK_FALSE(check_state_equiv(alpha, xr, mr, &witness));
  CHECK(witness.find("x") != std::string::npos);
}

TEST_CASE("differential run: a simple program is equivalent") {
  EquivVerdict v = differential_run(R"(
int main() {
    int i;
    int s;
    s = 0;
    for (i = 0; i < 5; i++) {
        s = s + i;
    }
    return s;
}
)",
                                    "test.c", "{}", 100000);
  CHECK(v.ok());
  CHECK(v.k == EquivVerdict::K::Equivalent);
}

TEST_CASE("differential run builds the injection over data and functions") {
  std::string translated;
  std::map<std::string, int64_t> counts;
  EquivVerdict v = differential_run(R"(
int tab[3] = {5, 6, 7};

int pick(int i) {
    return tab[i];
}

int main() {
    int x;
    x = pick(2);
    return x;
}
)",
                                    "test.c", "{}", 100000, &translated,
                                    nullptr, &counts);
  CHECK(v.ok());
  CHECK(translated.find("function pick") != std::string::npos);
  // Counters from both sides are merged into one map.
  CHECK(counts.count("T25"));
  CHECK(counts.count("UASS"));
}

TEST_CASE("differential run compares extern traces") {
  EquivVerdict v = differential_run(R"(
extern int sense(void);

int main() {
    int a;
    a = sense();
    return a;
}
)",
                                    "test.c",
                                    R"({"sense": {"returns": [9]}})", 100000);
  CHECK(v.ok());
}

TEST_CASE("differential run: shared divergence is both-timeout") {
  EquivVerdict v = differential_run(R"(
int main() {
    int x;
    x = 0;
    while (1) {
        x = x + 1;
    }
    return x;
}
)",
                                    "test.c", "{}", 2000);
  CHECK(v.k == EquivVerdict::K::BothTimeout);
  CHECK(v.ok());
}

TEST_CASE("differential run rejects invalid input") {
  DiagnosticSink sink;
  EquivVerdict v =
      differential_run("int main() { goto x; x: return 0; }", "test.c", "{}",
                       1000, nullptr, &sink);
  CHECK_FALSE(v.ok());
  CHECK(sink.has_errors());
}

TEST_CASE("verdicts render to text and json") {
  EquivVerdict v;
  v.k = EquivVerdict::K::Equivalent;
  CHECK(v.to_string().find("equivalent") != std::string::npos);
  CHECK(v.to_json().find("equivalent") != std::string::npos);
  v.k = EquivVerdict::K::Mismatch;
  v.witness = "x: 1 vs 2";
  CHECK(v.to_string().find("x: 1 vs 2") != std::string::npos);
  CHECK_FALSE(v.ok());
}
