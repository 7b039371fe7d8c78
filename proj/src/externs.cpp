#include "c2m/externs.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <stdexcept>

namespace c2m {

std::string TraceEvent::render() const {
  std::ostringstream os;
  os << callee << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ',';
    os << args[i].show();
  }
  os << ") = " << result.show();
  return os.str();
}

ExternEnv ExternEnv::from_json(const std::string& json_text) {
  ExternEnv env;
  auto j = nlohmann::json::parse(json_text);
  if (!j.is_object()) throw std::runtime_error("extern fixture must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    ExternModel m;
    const auto& spec = it.value();
    if (!spec.is_object()) throw std::runtime_error("extern model must be an object");
    if (spec.contains("returns"))
      for (const auto& v : spec["returns"]) m.returns.push_back(v.get<int64_t>());
    if (spec.contains("cycle")) m.cycle = spec["cycle"].get<bool>();
    if (spec.contains("event")) m.event = spec["event"].get<bool>();
    env.models_[it.key()] = m;
  }
  return env;
}

bool ExternEnv::call(const std::string& name, const std::vector<Value>& args,
                     Value* result, std::string* err) {
  auto it = models_.find(name);
  // Unscripted externals return zero and still show up in the trace.
  static const ExternModel kDefault;
  const ExternModel& m = it == models_.end() ? kDefault : it->second;
  size_t& cur = cursor_[name];
  int64_t ret = 0;
  if (!m.returns.empty()) {
    if (cur >= m.returns.size()) {
      if (m.cycle)
        cur = 0;
      else {
        *err = "extern model for '" + name + "' exhausted";
        return false;
      }
    }
    ret = m.returns[cur++];
  }
  *result = Value::int_v(ret);
  if (m.event) trace_.push_back({name, args, *result});
  return true;
}

void ExternEnv::reset_consumption() {
  cursor_.clear();
  trace_.clear();
}

}  // namespace c2m
