#include "c2m/diag.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace c2m {

static const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "error";
}

std::string Diagnostic::render() const {
  std::ostringstream os;
  os << file << ':' << span.line << ':' << span.col << ": "
     << severity_name(severity) << ": " << message;
  if (item > 0) os << " [item-" << item << ']';
  return os.str();
}

std::string Diagnostic::to_json() const {
  nlohmann::json j{
      {"file", file},         {"line", span.line},
      {"col", span.col},      {"severity", severity_name(severity)},
      {"message", message},
  };
  if (item > 0) j["item"] = item;
  return j.dump();
}

}  // namespace c2m
