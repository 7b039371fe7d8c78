#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c2m/diag.hpp"

namespace c2m::xdc {

enum class Tok {
  End, Ident, Keyword, IntLit, FloatLit, CharLit, StringLit, Punct,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;     // identifier / keyword / punctuator spelling
  int64_t int_val = 0;  // IntLit / CharLit
  double float_val = 0; // FloatLit
  Span span;

  bool is(const char* s) const { return text == s; }
  bool is_kw(const char* s) const { return kind == Tok::Keyword && text == s; }
  bool is_punct(const char* s) const { return kind == Tok::Punct && text == s; }
};

// Tokenize C source. Preprocessor lines (leading '#') are rejected with a
// diagnostic. Returns tokens ending with an End token.
std::vector<Token> tokenize(const std::string& src, const std::string& file,
                            DiagnosticSink& sink);

}  // namespace c2m::xdc
