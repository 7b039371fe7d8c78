#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "c2m/value.hpp"

namespace c2m {

// Deterministic model of the external environment, shared by both
// interpreters so differential runs see identical stub behaviour.
//
// JSON fixture format (".externs.json"):
//   { "getchar": { "returns": [104, 105, -1] },
//     "printf":  { "returns": [0], "cycle": true, "event": true } }
//
// Each call to `name` consumes the next scripted return value (an int) and,
// when `event` is set, records a trace event "name(v1,...,vn, ret)". With
// "cycle" the list repeats; otherwise exhausting it is a runtime error.
struct ExternModel {
  std::vector<int64_t> returns;
  bool cycle = false;
  bool event = true;
};

struct TraceEvent {
  std::string callee;
  std::vector<Value> args;
  Value result;
  std::string render() const;  // "callee(arg1,...,argn) = result"
};

class ExternEnv {
 public:
  ExternEnv() = default;

  // Load models from JSON text; throws std::runtime_error on bad input.
  static ExternEnv from_json(const std::string& json_text);

  bool has(const std::string& name) const { return models_.count(name) > 0; }

  // Perform one external call: consumes scripted input, records the event.
  // Returns false (with *err set) when the model is missing or exhausted.
  bool call(const std::string& name, const std::vector<Value>& args,
            Value* result, std::string* err);

  const std::vector<TraceEvent>& trace() const { return trace_; }
  void reset_consumption();

 private:
  std::map<std::string, ExternModel> models_;
  std::map<std::string, size_t> cursor_;
  std::vector<TraceEvent> trace_;
};

}  // namespace c2m
