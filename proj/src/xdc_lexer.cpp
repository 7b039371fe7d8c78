#include "c2m/xdc_lexer.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

namespace c2m::xdc {

namespace {

const std::set<std::string> kKeywords = {
    "void", "char", "short", "int", "long", "float", "double",
    "signed", "unsigned", "struct", "union", "enum",
    "if", "else", "while", "do", "for", "switch", "case", "default",
    "break", "continue", "return", "goto", "sizeof",
    "typedef", "extern", "static", "auto", "register", "const", "volatile",
};

// Multi-character punctuators, longest first.
const char* kPuncts[] = {
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
};

}  // namespace

std::vector<Token> tokenize(const std::string& src, const std::string& file,
                            DiagnosticSink& sink) {
  std::vector<Token> toks;
  size_t i = 0, n = src.size();
  int line = 1, col = 1;
  bool at_line_start = true;

  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k && i < n; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        at_line_start = true;
      } else {
        ++col;
        if (!std::isspace(static_cast<unsigned char>(src[i])))
          at_line_start = false;
      }
    }
  };

  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Span sp{line, col};
    if (c == '#' && at_line_start) {
      sink.error(file, sp,
                 "preprocessor directives are not accepted; run the "
                 "preprocessor first");
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      advance(2);
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= n) {
        sink.error(file, sp, "unterminated block comment");
        break;
      }
      advance(2);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                       src[j] == '_'))
        ++j;
      std::string word = src.substr(i, j - i);
      Token t;
      t.kind = kKeywords.count(word) ? Tok::Keyword : Tok::Ident;
      t.text = word;
      t.span = sp;
      toks.push_back(t);
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      size_t j = i;
      bool is_float = false, is_hex = false;
      if (src[j] == '0' && j + 1 < n && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
        is_hex = true;
        j += 2;
        while (j < n && std::isxdigit(static_cast<unsigned char>(src[j]))) ++j;
      } else {
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        if (j < n && src[j] == '.') {
          is_float = true;
          ++j;
          while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
        if (j < n && (src[j] == 'e' || src[j] == 'E')) {
          is_float = true;
          ++j;
          if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
          while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      std::string num = src.substr(i, j - i);
      Token t;
      t.span = sp;
      if (is_float) {
        t.kind = Tok::FloatLit;
        t.float_val = std::strtod(num.c_str(), nullptr);
        if (j < n && (src[j] == 'f' || src[j] == 'F' || src[j] == 'l' ||
                      src[j] == 'L'))
          ++j;
      } else {
        t.kind = Tok::IntLit;
        t.int_val = std::strtoll(num.c_str(), nullptr, is_hex ? 16 : 10);
        while (j < n && (src[j] == 'u' || src[j] == 'U' || src[j] == 'l' ||
                         src[j] == 'L'))
          ++j;  // suffixes accepted, not distinguished (single 32-bit model)
      }
      t.text = src.substr(i, j - i);
      toks.push_back(t);
      advance(j - i);
      continue;
    }
    if (c == '\'') {
      size_t j = i + 1;
      int64_t v = 0;
      if (j < n && src[j] == '\\') {
        ++j;
        if (j < n) {
          switch (src[j]) {
            case 'n': v = '\n'; break;
            case 't': v = '\t'; break;
            case 'r': v = '\r'; break;
            case '0': v = 0; break;
            case '\\': v = '\\'; break;
            case '\'': v = '\''; break;
            default: v = src[j];
          }
          ++j;
        }
      } else if (j < n) {
        v = static_cast<unsigned char>(src[j]);
        ++j;
      }
      if (j >= n || src[j] != '\'') {
        sink.error(file, sp, "unterminated character constant");
        advance(j - i);
        continue;
      }
      ++j;
      Token t;
      t.kind = Tok::CharLit;
      t.int_val = v;
      t.text = src.substr(i, j - i);
      t.span = sp;
      toks.push_back(t);
      advance(j - i);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      std::string val;
      while (j < n && src[j] != '"') {
        if (src[j] == '\\' && j + 1 < n) {
          switch (src[j + 1]) {
            case 'n': val += '\n'; break;
            case 't': val += '\t'; break;
            default: val += src[j + 1];
          }
          j += 2;
        } else {
          val += src[j++];
        }
      }
      if (j >= n) {
        sink.error(file, sp, "unterminated string literal");
        break;
      }
      ++j;
      Token t;
      t.kind = Tok::StringLit;
      t.text = val;
      t.span = sp;
      toks.push_back(t);
      advance(j - i);
      continue;
    }
    // Punctuators.
    bool matched = false;
    for (const char* p : kPuncts) {
      size_t len = std::char_traits<char>::length(p);
      if (src.compare(i, len, p) == 0) {
        Token t;
        t.kind = Tok::Punct;
        t.text = p;
        t.span = sp;
        toks.push_back(t);
        advance(len);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string singles = "+-*/%<>=!&|^~?:;,.(){}[]";
    if (singles.find(c) != std::string::npos) {
      Token t;
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      t.span = sp;
      toks.push_back(t);
      advance(1);
      continue;
    }
    sink.error(file, sp, std::string("stray character '") + c + "' in input");
    advance(1);
  }
  Token end;
  end.kind = Tok::End;
  end.span = {line, col};
  toks.push_back(end);
  return toks;
}

}  // namespace c2m::xdc
