#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "c2m/msvl_interp.hpp"
#include "c2m/value.hpp"
#include "c2m/xdc_interp.hpp"

namespace c2m {

// ---------------------------------------------------------------------------
// Memory injection: an injective partial map from source-side blocks to
// (target-side block, offset shift). Values are equivalent under α when they
// are equal scalars, or pointers related by α with the offset law
// i' = i + δ.
// ---------------------------------------------------------------------------

class MemoryInjection {
 public:
  // Returns false when adding would break injectivity.
  bool add(int32_t src_block, int32_t dst_block, int32_t delta);
  std::optional<std::pair<int32_t, int32_t>> map(int32_t src_block) const;
  size_t size() const { return fwd_.size(); }

 private:
  std::map<int32_t, std::pair<int32_t, int32_t>> fwd_;
  std::map<int32_t, int32_t> rev_;  // injectivity check
};

bool check_value_equiv(const MemoryInjection& alpha, const Value& a,
                       const Value& b, std::string* why);

// Build α from the two final-frame block maps, pairing variables by the
// translator's name mapping (and functions by name). Fails on domain mismatch.
std::optional<MemoryInjection> build_injection(
    const xdc::RunResult& xr, const msvl::RunResult& mr, std::string* why);

// ---------------------------------------------------------------------------
// Differential verdicts
// ---------------------------------------------------------------------------

struct EquivVerdict {
  enum class K {
    Equivalent,      // both terminated, states and traces agree
    Mismatch,        // a comparable observation differs
    BothTimeout,     // both ran out of fuel with agreeing trace prefixes
    VerdictMismatch, // one terminated, the other did not (or errors differ)
  } k = K::Mismatch;
  std::string witness;        // first differing observation, human-readable
  std::string to_string() const;
  std::string to_json() const;
  bool ok() const { return k == K::Equivalent || k == K::BothTimeout; }
};

// Compare final states per the observable-equivalence definition: every
// variable of the shared domain except the control-flag auxiliaries
// {break, continue, return, switch, RVal} must hold α-equivalent values.
bool check_state_equiv(const MemoryInjection& alpha, const xdc::RunResult& xr,
                       const msvl::RunResult& mr, std::string* witness);

// Full differential run: analyze + translate + run both + compare.
// `c_src` is the source program; externs_json may be empty ("{}").
EquivVerdict differential_run(const std::string& c_src, const std::string& file,
                              const std::string& externs_json, int64_t fuel,
                              std::string* translated_out = nullptr,
                              DiagnosticSink* sink_out = nullptr,
                              std::map<std::string, int64_t>* rule_counts = nullptr);

}  // namespace c2m
