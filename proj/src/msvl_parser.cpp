#include <cctype>
#include <cstdlib>
#include <optional>
#include <set>

#include "c2m/msvl_ast.hpp"

// Parser for the textual program form (the emitter's output plus hand-written
// test programs). Keywords: empty skip more and or ext if then else while
// function struct true false prev alw next, plus the type spellings.

namespace c2m::msvl {

namespace {

using xdc::TypeKind;
using xdc::TypePtr;

struct Token {
  enum class K { End, Ident, Keyword, Int, Float, Punct } k = K::End;
  std::string text;
  int64_t int_val = 0;
  double float_val = 0;
  Span span;
  bool is(const char* s) const { return text == s; }
};

const std::set<std::string> kKeywords = {
    "empty", "skip",  "more",  "and",    "or",     "ext",   "if",
    "then",  "else",  "while", "function", "struct", "true", "false",
    "prev",  "alw",   "next",  "int",    "char",   "short", "long",
    "float", "double", "void", "unsigned", "signed",
};

std::vector<Token> lex(const std::string& src, const std::string& file,
                       DiagnosticSink& sink) {
  std::vector<Token> out;
  size_t i = 0, n = src.size();
  int line = 1, col = 1;
  auto adv = [&](size_t k) {
    for (size_t j = 0; j < k && i < n; ++j, ++i) {
      if (src[i] == '\n') { ++line; col = 1; } else ++col;
    }
  };
  static const char* multi[] = {"<==", ":=", "->", "<=", ">=", "!=", "<<", ">>"};
  while (i < n) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { adv(1); continue; }
    Span sp{line, col};
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') adv(1);
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      adv(2);
      while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) adv(1);
      adv(2);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                       src[j] == '_'))
        ++j;
      Token t;
      t.text = src.substr(i, j - i);
      t.k = kKeywords.count(t.text) ? Token::K::Keyword : Token::K::Ident;
      t.span = sp;
      out.push_back(t);
      adv(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      bool is_float = false;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < n && src[j] == '.' && j + 1 < n &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
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
      Token t;
      t.text = src.substr(i, j - i);
      t.span = sp;
      if (is_float) {
        t.k = Token::K::Float;
        t.float_val = std::strtod(t.text.c_str(), nullptr);
      } else {
        t.k = Token::K::Int;
        t.int_val = std::strtoll(t.text.c_str(), nullptr, 10);
      }
      out.push_back(t);
      adv(j - i);
      continue;
    }
    bool matched = false;
    for (const char* m : multi) {
      size_t len = std::char_traits<char>::length(m);
      if (src.compare(i, len, m) == 0) {
        Token t;
        t.k = Token::K::Punct;
        t.text = m;
        t.span = sp;
        out.push_back(t);
        adv(len);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string singles = "+-*/%<>=!&|^~;:,.(){}[]";
    if (singles.find(c) != std::string::npos) {
      Token t;
      t.k = Token::K::Punct;
      t.text = std::string(1, c);
      t.span = sp;
      out.push_back(t);
      adv(1);
      continue;
    }
    sink.error(file, sp, std::string("stray character '") + c + "'");
    adv(1);
  }
  Token end;
  end.span = {line, col};
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file, DiagnosticSink& sink)
      : toks_(std::move(toks)), file_(std::move(file)), sink_(sink) {}

  std::optional<Program> parse();

 private:
  std::vector<Token> toks_;
  std::string file_;
  DiagnosticSink& sink_;
  size_t pos_ = 0;
  bool failed_ = false;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  void bump() { if (pos_ + 1 < toks_.size()) ++pos_; }
  bool accept(const char* s) {
    if (cur().text == s && cur().k != Token::K::End) { bump(); return true; }
    return false;
  }
  bool expect(const char* s) {
    if (accept(s)) return true;
    error(std::string("expected '") + s + "', found '" +
          (cur().k == Token::K::End ? "end of input" : cur().text) + "'");
    return false;
  }
  void error(const std::string& m) {
    sink_.error(file_, cur().span, m);
    failed_ = true;
  }

  bool at_type() const {
    if (cur().k != Token::K::Keyword) return false;
    const std::string& t = cur().text;
    return t == "int" || t == "char" || t == "short" || t == "long" ||
           t == "float" || t == "double" || t == "void" || t == "unsigned" ||
           t == "signed" || (t == "struct" && peek().k == Token::K::Ident &&
                             !peek(2).is("{"));
  }

  TypePtr parse_type() {
    bool uns = accept("unsigned");
    if (!uns) accept("signed");
    if (accept("char")) return xdc::make_type(uns ? TypeKind::UChar : TypeKind::Char);
    if (accept("short")) { accept("int"); return xdc::make_type(uns ? TypeKind::UShort : TypeKind::Short); }
    if (accept("long")) {
      if (accept("double")) return xdc::make_type(TypeKind::Double);
      accept("int");
      return xdc::make_type(uns ? TypeKind::ULong : TypeKind::Long);
    }
    if (accept("int")) return xdc::make_type(uns ? TypeKind::UInt : TypeKind::Int);
    if (uns) return xdc::make_type(TypeKind::UInt);
    if (accept("float")) return xdc::make_type(TypeKind::Float);
    if (accept("double")) return xdc::make_type(TypeKind::Double);
    if (accept("void")) return xdc::make_type(TypeKind::Void);
    if (accept("struct")) {
      if (cur().k != Token::K::Ident) { error("expected struct name"); return nullptr; }
      auto t = xdc::make_struct(cur().text);
      bump();
      return t;
    }
    error("expected a type");
    return nullptr;
  }

  // Declarator after a base type: *...name[dims] or (*name)(params).
  bool parse_declarator(TypePtr base, std::string* name, TypePtr* out) {
    TypePtr t = std::move(base);
    while (accept("*")) t = xdc::make_ptr(t);
    if (cur().is("(") && peek().is("*")) {
      bump(); bump();
      if (cur().k != Token::K::Ident) { error("expected name"); return false; }
      *name = cur().text;
      bump();
      if (!expect(")") || !expect("(")) return false;
      auto ft = xdc::make_type(TypeKind::Func);
      ft->elem = t;
      if (!cur().is(")")) {
        for (;;) {
          TypePtr pb = parse_type();
          if (!pb) return false;
          std::string pn;
          TypePtr pt;
          if (cur().k == Token::K::Ident || cur().is("*") ||
              (cur().is("(") && peek().is("*"))) {
            if (!parse_declarator(pb, &pn, &pt)) return false;
          } else {
            pt = pb;
          }
          ft->params.push_back(pt);
          if (!accept(",")) break;
        }
      }
      if (!expect(")")) return false;
      *out = xdc::make_ptr(ft);
      return true;
    }
    if (cur().k != Token::K::Ident) { error("expected name in declaration"); return false; }
    *name = cur().text;
    bump();
    std::vector<int> dims;
    while (accept("[")) {
      if (cur().k != Token::K::Int) { error("expected array bound"); return false; }
      dims.push_back(static_cast<int>(cur().int_val));
      bump();
      if (!expect("]")) return false;
    }
    for (auto it = dims.rbegin(); it != dims.rend(); ++it)
      t = xdc::make_array(t, *it);
    *out = t;
    return true;
  }

  // Expression precedence: or(1) and(2) | (3) ^(4) & (5) =,!= (6) rel (7)
  // shift (8) +- (9) */% (10).
  int prec_of(const Token& t, BinOp* op) const {
    struct E { const char* s; BinOp op; int p; bool kw; };
    static const E table[] = {
        {"or", BinOp::Or, 1, true},   {"and", BinOp::And, 2, true},
        {"|", BinOp::BitOr, 3, false}, {"^", BinOp::BitXor, 4, false},
        {"&", BinOp::BitAnd, 5, false}, {"=", BinOp::Eq, 6, false},
        {"!=", BinOp::Ne, 6, false},  {"<", BinOp::Lt, 7, false},
        {">", BinOp::Gt, 7, false},   {"<=", BinOp::Le, 7, false},
        {">=", BinOp::Ge, 7, false},  {"<<", BinOp::Shl, 8, false},
        {">>", BinOp::Shr, 8, false}, {"+", BinOp::Add, 9, false},
        {"-", BinOp::Sub, 9, false},  {"*", BinOp::Mul, 10, false},
        {"/", BinOp::Div, 10, false}, {"%", BinOp::Mod, 10, false},
    };
    for (const auto& e : table) {
      if (t.text == e.s &&
          ((e.kw && t.k == Token::K::Keyword) ||
           (!e.kw && t.k == Token::K::Punct)))
        { *op = e.op; return e.p; }
    }
    return -1;
  }

  ExprPtr parse_expr(int min_prec) {
    ExprPtr lhs = parse_unary_expr();
    if (!lhs) return nullptr;
    for (;;) {
      BinOp op;
      int p = prec_of(cur(), &op);
      if (p < min_prec) return lhs;
      bump();
      ExprPtr rhs = parse_expr(p + 1);
      if (!rhs) return nullptr;
      lhs = binary(op, lhs, rhs);
    }
  }

  ExprPtr parse_unary_expr() {
    if (accept("-")) {
      auto e = make_expr(ExprKind::Unary);
      e->un_op = UnOp::Neg;
      e->kids = {parse_unary_expr()};
      return e->kids[0] ? e : nullptr;
    }
    if (accept("!")) {
      auto e = make_expr(ExprKind::Unary);
      e->un_op = UnOp::Not;
      e->kids = {parse_unary_expr()};
      return e->kids[0] ? e : nullptr;
    }
    if (accept("~")) {
      auto e = make_expr(ExprKind::Unary);
      e->un_op = UnOp::BitNot;
      e->kids = {parse_unary_expr()};
      return e->kids[0] ? e : nullptr;
    }
    if (accept("*")) {
      auto e = make_expr(ExprKind::Deref);
      e->kids = {parse_unary_expr()};
      return e->kids[0] ? e : nullptr;
    }
    if (accept("&")) {
      auto e = make_expr(ExprKind::AddrOf);
      e->kids = {parse_unary_expr()};
      return e->kids[0] ? e : nullptr;
    }
    return parse_postfix_expr();
  }

  ExprPtr parse_postfix_expr() {
    ExprPtr e = parse_primary_expr();
    if (!e) return nullptr;
    for (;;) {
      if (accept("[")) {
        ExprPtr idx = parse_expr(3);
        if (!idx) return nullptr;
        if (!expect("]")) return nullptr;
        auto n = make_expr(ExprKind::Index);
        n->kids = {e, idx};
        e = n;
      } else if (cur().is(".") && peek().k == Token::K::Ident) {
        bump();
        auto n = make_expr(ExprKind::Field);
        n->name = cur().text;
        bump();
        n->kids = {e};
        e = n;
      } else if (cur().is("->") && peek().k == Token::K::Ident) {
        bump();
        auto n = make_expr(ExprKind::Arrow);
        n->name = cur().text;
        bump();
        n->kids = {e};
        e = n;
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_primary_expr() {
    if (cur().k == Token::K::Int) {
      auto e = int_lit(cur().int_val);
      bump();
      return e;
    }
    if (cur().k == Token::K::Float) {
      auto e = make_expr(ExprKind::FloatLit);
      e->float_val = cur().float_val;
      bump();
      return e;
    }
    if (accept("true")) return make_expr(ExprKind::True);
    if (accept("false")) return make_expr(ExprKind::False);
    if (cur().is("prev") && cur().k == Token::K::Keyword) {
      bump();
      if (!expect("(")) return nullptr;
      ExprPtr inner = parse_expr(0);
      if (!inner) return nullptr;
      if (!expect(")")) return nullptr;
      auto e = make_expr(ExprKind::Prev);
      e->kids = {inner};
      return e;
    }
    if (cur().is("ext") && cur().k == Token::K::Keyword) {
      bump();
      // External names may coincide with keywords; accept either here.
      if (cur().k != Token::K::Ident && cur().k != Token::K::Keyword) {
        error("expected callee after 'ext'");
        return nullptr;
      }
      auto e = make_expr(ExprKind::ExtCall);
      e->name = cur().text;
      bump();
      if (!expect("(")) return nullptr;
      if (!cur().is(")")) {
        for (;;) {
          ExprPtr a = parse_expr(3);
          if (!a) return nullptr;
          e->kids.push_back(a);
          if (!accept(",")) break;
        }
      }
      if (!expect(")")) return nullptr;
      return e;
    }
    if (cur().is("if") && cur().k == Token::K::Keyword) {
      bump();
      if (!expect("(")) return nullptr;
      ExprPtr b = parse_expr(0);
      if (!b) return nullptr;
      if (!expect(")")) return nullptr;
      if (!expect("then")) return nullptr;
      ExprPtr t = parse_expr(3);
      if (!t) return nullptr;
      if (!expect("else")) return nullptr;
      ExprPtr f = parse_expr(3);
      if (!f) return nullptr;
      auto e = make_expr(ExprKind::CondExpr);
      e->kids = {b, t, f};
      return e;
    }
    if (cur().k == Token::K::Ident) {
      auto e = var(cur().text);
      bump();
      return e;
    }
    if (cur().is("(") && peek().k == Token::K::Keyword &&
        (peek().is("int") || peek().is("char") || peek().is("short") ||
         peek().is("long") || peek().is("float") || peek().is("double") ||
         peek().is("unsigned") || peek().is("signed") || peek().is("void") ||
         peek().is("struct"))) {
      bump();  // (
      TypePtr t = parse_type();
      if (!t) return nullptr;
      while (accept("*")) t = xdc::make_ptr(t);
      if (!expect(")")) return nullptr;
      ExprPtr inner = parse_unary_expr();
      if (!inner) return nullptr;
      auto e = make_expr(ExprKind::Cast);
      e->cast_type = t;
      e->kids = {inner};
      return e;
    }
    if (accept("(")) {
      ExprPtr e = parse_expr(0);
      if (!e) return nullptr;
      if (!expect(")")) return nullptr;
      return e;
    }
    error("expected expression, found '" + cur().text + "'");
    return nullptr;
  }

  // --- statements ---

  StmtPtr parse_braced() {
    if (!expect("{")) return nullptr;
    StmtPtr s = parse_chop("}");
    if (!s) return nullptr;
    if (!expect("}")) return nullptr;
    return s;
  }

  // Chop list until a terminator token (not consumed).
  StmtPtr parse_chop(const char* term) {
    StmtPtr acc;
    for (;;) {
      StmtPtr s = parse_and();
      if (!s) return nullptr;
      acc = chop2(acc, s);
      if (cur().is(";") && !peek().is(term) && peek().k != Token::K::End) {
        bump();
        continue;
      }
      // Trailing semicolon before the terminator is tolerated.
      if (cur().is(";")) bump();
      return acc;
    }
  }

  StmtPtr parse_and() {
    StmtPtr acc;
    for (;;) {
      StmtPtr s = parse_conjunct();
      if (!s) return nullptr;
      acc = and2(acc, s);
      if (cur().is("and") && cur().k == Token::K::Keyword) {
        bump();
        continue;
      }
      return acc;
    }
  }

  StmtPtr parse_conjunct() {
    if (accept("empty")) return make_stmt(StmtKind::Empty);
    if (accept("skip")) return make_stmt(StmtKind::Skip);
    if (accept("more")) return make_stmt(StmtKind::More);
    if (cur().is("if") && cur().k == Token::K::Keyword) {
      bump();
      auto s = make_stmt(StmtKind::If);
      if (!expect("(")) return nullptr;
      s->cond = parse_expr(0);
      if (!s->cond) return nullptr;
      if (!expect(")")) return nullptr;
      if (!expect("then")) return nullptr;
      StmtPtr t = parse_braced();
      if (!t) return nullptr;
      if (!expect("else")) return nullptr;
      StmtPtr e = parse_braced();
      if (!e) return nullptr;
      s->kids = {t, e};
      return s;
    }
    if (cur().is("while") && cur().k == Token::K::Keyword) {
      bump();
      auto s = make_stmt(StmtKind::While);
      if (!expect("(")) return nullptr;
      s->cond = parse_expr(0);
      if (!s->cond) return nullptr;
      if (!expect(")")) return nullptr;
      StmtPtr b = parse_braced();
      if (!b) return nullptr;
      s->kids = {b};
      return s;
    }
    if (cur().is("next") && cur().k == Token::K::Keyword) {
      bump();
      auto s = make_stmt(StmtKind::Next);
      StmtPtr b = parse_braced();
      if (!b) return nullptr;
      s->kids = {b};
      return s;
    }
    if (cur().is("alw") && cur().k == Token::K::Keyword) {
      bump();
      auto s = make_stmt(StmtKind::Alw);
      StmtPtr b = parse_braced();
      if (!b) return nullptr;
      s->kids = {b};
      return s;
    }
    if (cur().is("ext") && cur().k == Token::K::Keyword) {
      bump();
      auto s = make_stmt(StmtKind::ExtCallStmt);
      if (cur().k != Token::K::Ident && cur().k != Token::K::Keyword) {
        error("expected callee after 'ext'");
        return nullptr;
      }
      s->name = cur().text;
      bump();
      if (!expect("(")) return nullptr;
      if (!cur().is(")")) {
        for (;;) {
          ExprPtr a = parse_expr(3);
          if (!a) return nullptr;
          s->args.push_back(a);
          if (!accept(",")) break;
        }
      }
      if (!expect(")")) return nullptr;
      return s;
    }
    if (at_type()) {
      auto s = make_stmt(StmtKind::Decl);
      TypePtr base = parse_type();
      if (!base) return nullptr;
      if (!parse_declarator(base, &s->name, &s->decl_type)) return nullptr;
      if (accept("<==")) {
        if (accept("{")) {
          if (!cur().is("}")) {
            for (;;) {
              ExprPtr e = parse_expr(3);
              if (!e) return nullptr;
              s->init_list.push_back(e);
              if (!accept(",")) break;
            }
          }
          if (!expect("}")) return nullptr;
        } else {
          s->rhs = parse_expr(3);
          if (!s->rhs) return nullptr;
        }
      }
      return s;
    }
    if (accept("(")) {
      StmtPtr s = parse_chop(")");
      if (!s) return nullptr;
      if (!expect(")")) return nullptr;
      return s;
    }
    // Call statement: ident '(' — distinguished from assignment targets.
    if (cur().k == Token::K::Ident && peek().is("(")) {
      auto s = make_stmt(StmtKind::Call);
      s->name = cur().text;
      bump();
      bump();  // (
      if (!cur().is(")")) {
        for (;;) {
          ExprPtr a = parse_expr(3);
          if (!a) return nullptr;
          s->args.push_back(a);
          if (!accept(",")) break;
        }
      }
      if (!expect(")")) return nullptr;
      return s;
    }
    // Assignment: la (<== | :=) ra.
    ExprPtr la = parse_unary_expr();
    if (!la) return nullptr;
    bool present = false;
    if (accept("<=="))
      present = true;
    else if (!expect(":="))
      return nullptr;
    ExprPtr ra = parse_expr(3);
    if (!ra) return nullptr;
    auto s = make_stmt(present ? StmtKind::PresentAssign : StmtKind::UnitAssign);
    s->lhs = la;
    s->rhs = ra;
    return s;
  }

  bool parse_struct_def(Program* p) {
    bump();  // struct
    StructDef sd;
    if (cur().k != Token::K::Ident) { error("expected struct name"); return false; }
    sd.name = cur().text;
    bump();
    if (!expect("{")) return false;
    for (;;) {
      TypePtr base = parse_type();
      if (!base) return false;
      std::string name;
      TypePtr t;
      if (!parse_declarator(base, &name, &t)) return false;
      sd.fields.emplace_back(name, t);
      if (accept("and")) continue;
      break;
    }
    if (!expect("}")) return false;
    if (!expect(";")) return false;
    p->structs.push_back(std::move(sd));
    return true;
  }

  bool parse_function(Program* p) {
    bump();  // function
    Func f;
    if (cur().k != Token::K::Ident) { error("expected function name"); return false; }
    f.name = cur().text;
    bump();
    if (!expect("(")) return false;
    if (!cur().is(")")) {
      for (;;) {
        TypePtr base = parse_type();
        if (!base) return false;
        std::string name;
        TypePtr t;
        if (!parse_declarator(base, &name, &t)) return false;
        f.params.emplace_back(name, t);
        if (!accept(",")) break;
      }
    }
    if (!expect(")")) return false;
    f.body = parse_braced();
    if (!f.body) return false;
    if (!expect(";")) return false;
    p->funcs.push_back(std::move(f));
    return true;
  }
};

std::optional<Program> Parser::parse() {
  Program p;
  for (;;) {
    if (cur().k == Token::K::End) break;
    if (cur().is("struct") && cur().k == Token::K::Keyword &&
        peek().k == Token::K::Ident && peek(2).is("{")) {
      if (!parse_struct_def(&p)) return std::nullopt;
      continue;
    }
    if (cur().is("function") && cur().k == Token::K::Keyword) {
      if (!parse_function(&p)) return std::nullopt;
      continue;
    }
    break;
  }
  if (cur().k != Token::K::End) {
    p.body = parse_chop("\0");
    if (!p.body) return std::nullopt;
  }
  if (failed_) return std::nullopt;
  if (cur().k != Token::K::End) {
    error("trailing input after program body");
    return std::nullopt;
  }
  return p;
}

}  // namespace

std::optional<Program> parse_msvl(const std::string& src,
                                  const std::string& file,
                                  DiagnosticSink& sink) {
  auto toks = lex(src, file, sink);
  if (sink.has_errors()) return std::nullopt;
  Parser p(std::move(toks), file, sink);
  return p.parse();
}

}  // namespace c2m::msvl
