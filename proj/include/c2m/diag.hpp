#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace c2m {

// Source position, 1-based. line==0 means "no position" (whole-file notes).
struct Span {
  int line = 0;
  int col = 0;
};

enum class Severity { Error, Warning, Note };

// A single diagnostic. `item` is the restricted-subset item code (1..14) when
// the diagnostic reports a language-subset violation, 0 otherwise.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string file;
  Span span;
  std::string message;
  int item = 0;

  std::string render() const;      // "file:line:col: error: msg [item-N]"
  std::string to_json() const;     // one JSON object (single line)
};

struct DiagnosticSink {
  std::vector<Diagnostic> diags;

  void error(const std::string& file, Span s, const std::string& msg, int item = 0) {
    diags.push_back({Severity::Error, file, s, msg, item});
  }
  void warning(const std::string& file, Span s, const std::string& msg) {
    diags.push_back({Severity::Warning, file, s, msg, 0});
  }
  bool has_errors() const {
    for (const auto& d : diags)
      if (d.severity == Severity::Error) return true;
    return false;
  }
};

}  // namespace c2m
