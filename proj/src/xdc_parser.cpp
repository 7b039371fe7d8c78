#include <cstdlib>
#include <optional>

#include "c2m/xdc_frontend.hpp"
#include "c2m/xdc_lexer.hpp"

// Recursive-descent parser. It deliberately accepts a superset of the
// restricted language (goto, comma expressions, compound assignment, storage
// classes, ...) and leaves precise rejection to check_subset, which can then
// report exclusion-list item codes instead of opaque syntax errors.

namespace c2m::xdc {

namespace {

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
  Program prog_;
  bool failed_ = false;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Span here() const { return cur().span; }
  void bump() { if (pos_ + 1 < toks_.size()) ++pos_; }

  bool accept_punct(const char* p) {
    if (cur().is_punct(p)) { bump(); return true; }
    return false;
  }
  bool accept_kw(const char* k) {
    if (cur().is_kw(k)) { bump(); return true; }
    return false;
  }
  bool expect_punct(const char* p) {
    if (accept_punct(p)) return true;
    error(std::string("expected '") + p + "' before '" + describe(cur()) + "'");
    return false;
  }
  void error(const std::string& msg) {
    sink_.error(file_, here(), msg);
    failed_ = true;
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return t.text;
  }

  bool at_type_start() const;
  TypePtr parse_type_specifier();
  struct Declarator {
    std::string name;
    TypePtr type;  // full type with specifier substituted at the core
    bool is_func = false;
    std::vector<VarDecl> params;
    bool varargs = false;
    Span span;
  };
  bool parse_declarator(TypePtr base, Declarator* out);
  bool parse_param_list(std::vector<VarDecl>* params, bool* varargs);
  bool parse_init(VarDecl* d);

  bool parse_top_level();
  bool parse_struct_def(bool is_union);
  bool parse_var_decl_group(TypePtr base, Declarator first, bool storage,
                            const std::string& storage_kw, bool qualified,
                            std::vector<VarDecl>* out);

  StmtPtr parse_stmt();
  StmtPtr parse_block();
  StmtPtr parse_expr_stmt(bool need_semi);
  StmtPtr classify_expr_stmt(ExprPtr e, Span sp);
  bool parse_switch_body(Stmt* sw);
  bool parse_case_label(int64_t* out);

  ExprPtr parse_comma_expr();
  ExprPtr parse_assignment();
  ExprPtr parse_conditional();
  ExprPtr parse_binary(int min_prec);
  ExprPtr parse_unary();
  ExprPtr parse_postfix();
  ExprPtr parse_primary();
};

// --- types -----------------------------------------------------------------

bool Parser::at_type_start() const {
  const Token& t = cur();
  if (t.kind != Tok::Keyword) return false;
  return t.text == "void" || t.text == "char" || t.text == "short" ||
         t.text == "int" || t.text == "long" || t.text == "float" ||
         t.text == "double" || t.text == "signed" || t.text == "unsigned" ||
         t.text == "struct" || t.text == "union" || t.text == "const" ||
         t.text == "volatile" || t.text == "typedef" || t.text == "extern" ||
         t.text == "static" || t.text == "auto" || t.text == "register";
}

TypePtr Parser::parse_type_specifier() {
  bool is_unsigned = false, is_signed = false;
  if (accept_kw("unsigned")) is_unsigned = true;
  else if (accept_kw("signed")) is_signed = true;
  (void)is_signed;

  if (accept_kw("char"))
    return make_type(is_unsigned ? TypeKind::UChar : TypeKind::Char);
  if (accept_kw("short")) {
    accept_kw("int");
    return make_type(is_unsigned ? TypeKind::UShort : TypeKind::Short);
  }
  if (accept_kw("long")) {
    if (accept_kw("double")) return make_type(TypeKind::Double);
    accept_kw("int");
    return make_type(is_unsigned ? TypeKind::ULong : TypeKind::Long);
  }
  if (accept_kw("int"))
    return make_type(is_unsigned ? TypeKind::UInt : TypeKind::Int);
  if (is_unsigned) return make_type(TypeKind::UInt);
  if (is_signed) return make_type(TypeKind::Int);
  if (accept_kw("float")) return make_type(TypeKind::Float);
  if (accept_kw("double")) return make_type(TypeKind::Double);
  if (accept_kw("void")) return make_type(TypeKind::Void);
  if (cur().is_kw("struct") || cur().is_kw("union")) {
    bump();
    if (cur().kind != Tok::Ident) {
      error("expected struct name");
      return nullptr;
    }
    auto t = make_struct(cur().text);
    bump();
    return t;
  }
  error("expected type specifier, found '" + describe(cur()) + "'");
  return nullptr;
}

bool Parser::parse_param_list(std::vector<VarDecl>* params, bool* varargs) {
  if (accept_punct(")")) return true;  // f()
  if (cur().is_kw("void") && peek().is_punct(")")) {
    bump();
    bump();
    return true;
  }
  for (;;) {
    if (accept_punct("...")) {
      *varargs = true;
      break;
    }
    TypePtr base = parse_type_specifier();
    if (!base) return false;
    // Abstract parameter (type only), as in a function-pointer type's list.
    while (cur().is_punct("*")) {
      base = make_ptr(base);
      bump();
    }
    if (cur().is_punct(",") || cur().is_punct(")")) {
      VarDecl vd;
      vd.name = "";
      vd.type = base;
      vd.span = here();
      params->push_back(vd);
      if (!accept_punct(",")) break;
      continue;
    }
    Declarator d;
    if (!parse_declarator(base, &d)) return false;
    VarDecl vd;
    vd.name = d.name;
    vd.type = d.type;
    vd.span = d.span;
    params->push_back(vd);
    if (!accept_punct(",")) break;
  }
  return expect_punct(")");
}

// Declarator forms: *... name, *... (*name)(params), name[n], name[n][m],
// name(params).
bool Parser::parse_declarator(TypePtr base, Declarator* out) {
  TypePtr t = std::move(base);
  while (accept_punct("*")) t = make_ptr(t);

  if (cur().is_punct("(") && peek().is_punct("*")) {
    // Function-pointer declarator: (*name)(params)
    bump();  // (
    bump();  // *
    if (cur().kind != Tok::Ident) {
      error("expected identifier in function-pointer declarator");
      return false;
    }
    out->name = cur().text;
    out->span = here();
    bump();
    if (!expect_punct(")")) return false;
    if (!expect_punct("(")) return false;
    auto ft = make_type(TypeKind::Func);
    ft->elem = t;
    std::vector<VarDecl> params;
    bool varargs = false;
    if (!parse_param_list(&params, &varargs)) return false;
    for (auto& p : params) ft->params.push_back(p.type);
    out->type = make_ptr(ft);
    return true;
  }

  if (cur().kind != Tok::Ident) {
    error("expected identifier in declarator, found '" + describe(cur()) + "'");
    return false;
  }
  out->name = cur().text;
  out->span = here();
  bump();

  if (cur().is_punct("(")) {
    bump();
    out->is_func = true;
    if (!parse_param_list(&out->params, &out->varargs)) return false;
    auto ft = make_type(TypeKind::Func);
    ft->elem = t;
    for (auto& p : out->params) ft->params.push_back(p.type);
    out->type = ft;
    return true;
  }

  std::vector<int> dims;
  while (accept_punct("[")) {
    if (accept_punct("]")) {
      dims.push_back(-1);  // unsized; fixed up from the initializer
    } else {
      int sign = accept_punct("-") ? -1 : 1;
      if (cur().kind != Tok::IntLit) {
        error("array bound must be an integer constant");
        return false;
      }
      dims.push_back(sign * static_cast<int>(cur().int_val));
      bump();
      if (!expect_punct("]")) return false;
    }
  }
  for (auto it = dims.rbegin(); it != dims.rend(); ++it)
    t = make_array(t, *it);
  out->type = t;
  return true;
}

bool Parser::parse_init(VarDecl* d) {
  if (accept_punct("{")) {
    d->has_init_list = true;
    if (!cur().is_punct("}")) {
      for (;;) {
        ExprPtr e = parse_assignment();
        if (!e) return false;
        d->init_list.push_back(e);
        if (!accept_punct(",")) break;
      }
    }
    if (!expect_punct("}")) return false;
    // Fix up unsized arrays from the initializer length.
    if (d->type && d->type->kind == TypeKind::Array && d->type->array_size < 0)
      d->type = make_array(d->type->elem,
                           static_cast<int>(d->init_list.size()));
    return true;
  }
  d->init = parse_assignment();
  return d->init != nullptr;
}

// --- expressions -------------------------------------------------------------

ExprPtr Parser::parse_comma_expr() {
  ExprPtr e = parse_assignment();
  if (!e) return nullptr;
  while (cur().is_punct(",")) {
    Span sp = here();
    bump();
    ExprPtr rhs = parse_assignment();
    if (!rhs) return nullptr;
    auto c = make_expr(ExprKind::Comma, sp);
    c->kids = {e, rhs};
    e = c;
  }
  return e;
}

ExprPtr Parser::parse_assignment() {
  ExprPtr lhs = parse_conditional();
  if (!lhs) return nullptr;
  static const char* compound[] = {"+=", "-=", "*=", "/=", "%=",
                                   "<<=", ">>=", "&=", "|=", "^="};
  if (cur().is_punct("=")) {
    Span sp = here();
    bump();
    ExprPtr rhs = parse_assignment();  // right-associative (chains flagged)
    if (!rhs) return nullptr;
    auto a = make_expr(ExprKind::Assign, sp);
    a->kids = {lhs, rhs};
    return a;
  }
  for (const char* op : compound) {
    if (cur().is_punct(op)) {
      Span sp = here();
      std::string spelled = cur().text;
      bump();
      ExprPtr rhs = parse_assignment();
      if (!rhs) return nullptr;
      auto a = make_expr(ExprKind::CompoundAssign, sp);
      a->name = spelled;
      a->kids = {lhs, rhs};
      return a;
    }
  }
  return lhs;
}

ExprPtr Parser::parse_conditional() {
  ExprPtr c = parse_binary(0);
  if (!c) return nullptr;
  if (cur().is_punct("?")) {
    Span sp = here();
    bump();
    ExprPtr t = parse_assignment();
    if (!t) return nullptr;
    if (!expect_punct(":")) return nullptr;
    ExprPtr f = parse_conditional();
    if (!f) return nullptr;
    auto e = make_expr(ExprKind::Cond, sp);
    e->kids = {c, t, f};
    return e;
  }
  return c;
}

namespace {
struct BinSpec {
  const char* tok;
  BinOp op;
  int prec;
};
const BinSpec kBinOps[] = {
    {"||", BinOp::LogOr, 1},  {"&&", BinOp::LogAnd, 2},
    {"|", BinOp::BitOr, 3},   {"^", BinOp::BitXor, 4},
    {"&", BinOp::BitAnd, 5},  {"==", BinOp::Eq, 6},
    {"!=", BinOp::Ne, 6},     {"<", BinOp::Lt, 7},
    {">", BinOp::Gt, 7},      {"<=", BinOp::Le, 7},
    {">=", BinOp::Ge, 7},     {"<<", BinOp::Shl, 8},
    {">>", BinOp::Shr, 8},    {"+", BinOp::Add, 9},
    {"-", BinOp::Sub, 9},     {"*", BinOp::Mul, 10},
    {"/", BinOp::Div, 10},    {"%", BinOp::Mod, 10},
};
}  // namespace

ExprPtr Parser::parse_binary(int min_prec) {
  ExprPtr lhs = parse_unary();
  if (!lhs) return nullptr;
  for (;;) {
    const BinSpec* found = nullptr;
    if (cur().kind == Tok::Punct)
      for (const auto& s : kBinOps)
        if (cur().text == s.tok && s.prec >= min_prec) { found = &s; break; }
    if (!found) return lhs;
    Span sp = here();
    bump();
    ExprPtr rhs = parse_binary(found->prec + 1);
    if (!rhs) return nullptr;
    auto e = make_expr(ExprKind::Binary, sp);
    e->bin_op = found->op;
    e->kids = {lhs, rhs};
    lhs = e;
  }
}

ExprPtr Parser::parse_unary() {
  Span sp = here();
  if (accept_punct("-")) {
    auto e = make_expr(ExprKind::Unary, sp);
    e->un_op = UnOp::Neg;
    e->kids = {parse_unary()};
    return e->kids[0] ? e : nullptr;
  }
  if (accept_punct("!")) {
    auto e = make_expr(ExprKind::Unary, sp);
    e->un_op = UnOp::Not;
    e->kids = {parse_unary()};
    return e->kids[0] ? e : nullptr;
  }
  if (accept_punct("~")) {
    auto e = make_expr(ExprKind::Unary, sp);
    e->un_op = UnOp::BitNot;
    e->kids = {parse_unary()};
    return e->kids[0] ? e : nullptr;
  }
  if (accept_punct("*")) {
    auto e = make_expr(ExprKind::Unary, sp);
    e->un_op = UnOp::Deref;
    e->kids = {parse_unary()};
    return e->kids[0] ? e : nullptr;
  }
  if (accept_punct("&")) {
    auto e = make_expr(ExprKind::Unary, sp);
    e->un_op = UnOp::AddrOf;
    e->kids = {parse_unary()};
    return e->kids[0] ? e : nullptr;
  }
  if (accept_punct("+")) return parse_unary();  // unary plus is a no-op
  if (accept_punct("++")) {
    auto e = make_expr(ExprKind::Unary, sp);
    e->un_op = UnOp::PreInc;
    e->kids = {parse_unary()};
    return e->kids[0] ? e : nullptr;
  }
  if (accept_punct("--")) {
    auto e = make_expr(ExprKind::Unary, sp);
    e->un_op = UnOp::PreDec;
    e->kids = {parse_unary()};
    return e->kids[0] ? e : nullptr;
  }
  // Cast: '(' type ')' unary
  if (cur().is_punct("(") && peek().kind == Tok::Keyword) {
    const std::string& kw = peek().text;
    if (kw == "int" || kw == "char" || kw == "short" || kw == "long" ||
        kw == "float" || kw == "double" || kw == "unsigned" ||
        kw == "signed" || kw == "void" || kw == "struct") {
      bump();  // (
      TypePtr t = parse_type_specifier();
      if (!t) return nullptr;
      while (accept_punct("*")) t = make_ptr(t);
      if (!expect_punct(")")) return nullptr;
      ExprPtr inner = parse_unary();
      if (!inner) return nullptr;
      auto e = make_expr(ExprKind::Unary, sp);
      e->un_op = UnOp::Neg;  // placeholder; casts carry the target type
      e->name = "cast";
      e->type = t;  // pre-annotated: the cast's target type
      e->kids = {inner};
      return e;
    }
  }
  return parse_postfix();
}

ExprPtr Parser::parse_postfix() {
  ExprPtr e = parse_primary();
  if (!e) return nullptr;
  for (;;) {
    Span sp = here();
    if (accept_punct("[")) {
      ExprPtr idx = parse_comma_expr();
      if (!idx) return nullptr;
      if (!expect_punct("]")) return nullptr;
      auto n = make_expr(ExprKind::Index, sp);
      n->kids = {e, idx};
      e = n;
    } else if (accept_punct(".")) {
      if (cur().kind != Tok::Ident) {
        error("expected field name after '.'");
        return nullptr;
      }
      auto n = make_expr(ExprKind::Field, sp);
      n->name = cur().text;
      bump();
      n->kids = {e};
      e = n;
    } else if (accept_punct("->")) {
      if (cur().kind != Tok::Ident) {
        error("expected field name after '->'");
        return nullptr;
      }
      auto n = make_expr(ExprKind::Arrow, sp);
      n->name = cur().text;
      bump();
      n->kids = {e};
      e = n;
    } else if (accept_punct("(")) {
      auto n = make_expr(ExprKind::Call, sp);
      n->kids = {e};
      if (!cur().is_punct(")")) {
        for (;;) {
          ExprPtr arg = parse_assignment();
          if (!arg) return nullptr;
          n->kids.push_back(arg);
          if (!accept_punct(",")) break;
        }
      }
      if (!expect_punct(")")) return nullptr;
      e = n;
    } else if (cur().is_punct("++") || cur().is_punct("--")) {
      auto n = make_expr(ExprKind::PostIncDec, sp);
      n->int_val = cur().is_punct("++") ? 1 : -1;
      bump();
      n->kids = {e};
      e = n;
    } else {
      return e;
    }
  }
}

ExprPtr Parser::parse_primary() {
  Span sp = here();
  const Token& t = cur();
  switch (t.kind) {
    case Tok::IntLit: {
      auto e = make_expr(ExprKind::IntLit, sp);
      e->int_val = t.int_val;
      bump();
      return e;
    }
    case Tok::FloatLit: {
      auto e = make_expr(ExprKind::FloatLit, sp);
      e->float_val = t.float_val;
      bump();
      return e;
    }
    case Tok::CharLit: {
      auto e = make_expr(ExprKind::CharLit, sp);
      e->int_val = t.int_val;
      bump();
      return e;
    }
    case Tok::Ident: {
      auto e = make_expr(ExprKind::Var, sp);
      e->name = t.text;
      bump();
      return e;
    }
    default:
      break;
  }
  if (accept_punct("(")) {
    ExprPtr e = parse_comma_expr();
    if (!e) return nullptr;
    if (!expect_punct(")")) return nullptr;
    return e;
  }
  error("expected expression, found '" + describe(t) + "'");
  return nullptr;
}

// --- statements ---------------------------------------------------------------

StmtPtr Parser::classify_expr_stmt(ExprPtr e, Span sp) {
  if (!e) return nullptr;
  if (e->kind == ExprKind::Assign) {
    auto s = make_stmt(StmtKind::ExprAssign, sp);
    s->lhs = e->kids[0];
    s->expr = e->kids[1];
    // Chained assignment stays visible to the checker via the RHS node.
    return s;
  }
  if (e->kind == ExprKind::PostIncDec) {
    auto s = make_stmt(e->int_val > 0 ? StmtKind::PostInc : StmtKind::PostDec, sp);
    s->lhs = e->kids[0];
    return s;
  }
  if (e->kind == ExprKind::Call) {
    auto s = make_stmt(StmtKind::CallStmt, sp);
    s->expr = e;
    return s;
  }
  // Anything else (comma, compound assignment, bare expression) is kept for
  // diagnosis.
  auto s = make_stmt(StmtKind::ExprStmt, sp);
  s->expr = e;
  return s;
}

StmtPtr Parser::parse_expr_stmt(bool need_semi) {
  Span sp = here();
  ExprPtr e = parse_comma_expr();
  if (!e) return nullptr;
  if (need_semi && !expect_punct(";")) return nullptr;
  return classify_expr_stmt(e, sp);
}

bool Parser::parse_case_label(int64_t* out) {
  int sign = accept_punct("-") ? -1 : 1;
  if (cur().kind == Tok::IntLit || cur().kind == Tok::CharLit) {
    *out = sign * cur().int_val;
    bump();
    return true;
  }
  error("case label must be an integer constant");
  return false;
}

bool Parser::parse_switch_body(Stmt* sw) {
  if (!expect_punct("{")) return false;
  bool saw_default = false;
  while (!cur().is_punct("}") && cur().kind != Tok::End) {
    SwitchCase c;
    c.span = here();
    if (accept_kw("case")) {
      if (!parse_case_label(&c.label)) return false;
      if (!expect_punct(":")) return false;
    } else if (accept_kw("default")) {
      c.is_default = true;
      saw_default = true;
      if (!expect_punct(":")) return false;
    } else {
      error("expected 'case' or 'default' in switch body");
      return false;
    }
    while (!cur().is_punct("}") && !cur().is_kw("case") &&
           !cur().is_kw("default") && cur().kind != Tok::End) {
      StmtPtr s = parse_stmt();
      if (!s) return false;
      c.body.push_back(s);
    }
    sw->cases.push_back(std::move(c));
  }
  if (!expect_punct("}")) return false;
  if (!saw_default) {
    sink_.error(file_, sw->span, "switch requires a default clause");
    failed_ = true;
    return false;
  }
  return true;
}

StmtPtr Parser::parse_block() {
  Span sp = here();
  if (!expect_punct("{")) return nullptr;
  auto b = make_stmt(StmtKind::Block, sp);
  while (!cur().is_punct("}") && cur().kind != Tok::End) {
    if (at_type_start()) {
      // Declaration inside a block: parsed, flagged by the subset checker.
      auto d = make_stmt(StmtKind::Decl, here());
      bool storage = false, qualified = false;
      std::string storage_kw;
      while (cur().is_kw("typedef") || cur().is_kw("extern") ||
             cur().is_kw("static") || cur().is_kw("auto") ||
             cur().is_kw("register")) {
        storage = true;
        storage_kw = cur().text;
        bump();
      }
      while (cur().is_kw("const") || cur().is_kw("volatile")) {
        qualified = true;
        bump();
      }
      TypePtr base = parse_type_specifier();
      if (!base) return nullptr;
      Declarator first;
      if (!parse_declarator(base, &first)) return nullptr;
      if (!parse_var_decl_group(base, first, storage, storage_kw, qualified,
                                &d->decls))
        return nullptr;
      b->body.push_back(d);
      continue;
    }
    StmtPtr s = parse_stmt();
    if (!s) return nullptr;
    b->body.push_back(s);
  }
  if (!expect_punct("}")) return nullptr;
  return b;
}

StmtPtr Parser::parse_stmt() {
  Span sp = here();
  if (accept_punct(";")) return make_stmt(StmtKind::Null, sp);
  if (cur().is_punct("{")) return parse_block();
  if (accept_kw("if")) {
    auto s = make_stmt(StmtKind::If, sp);
    if (!expect_punct("(")) return nullptr;
    s->cond = parse_comma_expr();
    if (!s->cond) return nullptr;
    if (!expect_punct(")")) return nullptr;
    StmtPtr then = parse_stmt();
    if (!then) return nullptr;
    s->body.push_back(then);
    if (accept_kw("else")) {
      StmtPtr els = parse_stmt();
      if (!els) return nullptr;
      s->else_body.push_back(els);
    }
    return s;
  }
  if (accept_kw("while")) {
    auto s = make_stmt(StmtKind::While, sp);
    if (!expect_punct("(")) return nullptr;
    s->cond = parse_comma_expr();
    if (!s->cond) return nullptr;
    if (!expect_punct(")")) return nullptr;
    StmtPtr body = parse_stmt();
    if (!body) return nullptr;
    s->body.push_back(body);
    return s;
  }
  if (accept_kw("do")) {
    auto s = make_stmt(StmtKind::DoWhile, sp);
    StmtPtr body = parse_stmt();
    if (!body) return nullptr;
    s->body.push_back(body);
    if (!accept_kw("while")) {
      error("expected 'while' after do-body");
      return nullptr;
    }
    if (!expect_punct("(")) return nullptr;
    s->cond = parse_comma_expr();
    if (!s->cond) return nullptr;
    if (!expect_punct(")")) return nullptr;
    if (!expect_punct(";")) return nullptr;
    return s;
  }
  if (accept_kw("for")) {
    auto s = make_stmt(StmtKind::For, sp);
    if (!expect_punct("(")) return nullptr;
    if (!cur().is_punct(";")) {
      s->for_init = parse_expr_stmt(false);
      if (!s->for_init) return nullptr;
    }
    if (!expect_punct(";")) return nullptr;
    if (!cur().is_punct(";")) {
      s->cond = parse_comma_expr();
      if (!s->cond) return nullptr;
    }
    if (!expect_punct(";")) return nullptr;
    if (!cur().is_punct(")")) {
      s->for_step = parse_expr_stmt(false);
      if (!s->for_step) return nullptr;
    }
    if (!expect_punct(")")) return nullptr;
    StmtPtr body = parse_stmt();
    if (!body) return nullptr;
    s->body.push_back(body);
    return s;
  }
  if (accept_kw("switch")) {
    auto s = make_stmt(StmtKind::Switch, sp);
    if (!expect_punct("(")) return nullptr;
    s->cond = parse_comma_expr();
    if (!s->cond) return nullptr;
    if (!expect_punct(")")) return nullptr;
    if (!parse_switch_body(s.get())) return nullptr;
    return s;
  }
  if (accept_kw("break")) {
    if (!expect_punct(";")) return nullptr;
    return make_stmt(StmtKind::Break, sp);
  }
  if (accept_kw("continue")) {
    if (!expect_punct(";")) return nullptr;
    return make_stmt(StmtKind::Continue, sp);
  }
  if (accept_kw("return")) {
    auto s = make_stmt(StmtKind::Return, sp);
    if (!cur().is_punct(";")) {
      s->expr = parse_comma_expr();
      if (!s->expr) return nullptr;
    }
    if (!expect_punct(";")) return nullptr;
    return s;
  }
  if (accept_kw("goto")) {
    auto s = make_stmt(StmtKind::Goto, sp);
    if (cur().kind != Tok::Ident) {
      error("expected label after 'goto'");
      return nullptr;
    }
    s->name = cur().text;
    bump();
    if (!expect_punct(";")) return nullptr;
    return s;
  }
  // Label: ident ':'
  if (cur().kind == Tok::Ident && peek().is_punct(":")) {
    auto s = make_stmt(StmtKind::Label, sp);
    s->name = cur().text;
    bump();
    bump();
    return s;
  }
  return parse_expr_stmt(true);
}

// --- top level ---------------------------------------------------------------

bool Parser::parse_struct_def(bool is_union) {
  StructDef sd;
  sd.is_union = is_union;
  sd.span = here();
  bump();  // struct / union
  if (cur().kind != Tok::Ident) {
    error("expected struct name");
    return false;
  }
  sd.name = cur().text;
  bump();
  if (!expect_punct("{")) return false;
  while (!cur().is_punct("}") && cur().kind != Tok::End) {
    TypePtr base = parse_type_specifier();
    if (!base) return false;
    for (;;) {
      Declarator d;
      if (!parse_declarator(base, &d)) return false;
      sd.fields.push_back({d.name, d.type});
      if (!accept_punct(",")) break;
    }
    if (!expect_punct(";")) return false;
  }
  if (!expect_punct("}")) return false;
  if (!expect_punct(";")) return false;
  prog_.structs.push_back(std::move(sd));
  return true;
}

bool Parser::parse_var_decl_group(TypePtr base, Declarator first, bool storage,
                                  const std::string& storage_kw, bool qualified,
                                  std::vector<VarDecl>* out) {
  Declarator d = std::move(first);
  for (;;) {
    VarDecl vd;
    vd.name = d.name;
    vd.type = d.type;
    vd.span = d.span;
    vd.storage_class = storage;
    vd.storage_kw = storage_kw;
    vd.qualified = qualified;
    if (accept_punct("=")) {
      if (!parse_init(&vd)) return false;
    }
    out->push_back(std::move(vd));
    if (!accept_punct(",")) break;
    Declarator next;
    if (!parse_declarator(base, &next)) return false;
    d = std::move(next);
  }
  return expect_punct(";");
}

bool Parser::parse_top_level() {
  // struct/union definition: 'struct' Ident '{'
  if ((cur().is_kw("struct") || cur().is_kw("union")) &&
      peek().kind == Tok::Ident && peek(2).is_punct("{"))
    return parse_struct_def(cur().is_kw("union"));

  bool storage = false, qualified = false;
  std::string storage_kw;
  while (cur().is_kw("typedef") || cur().is_kw("extern") ||
         cur().is_kw("static") || cur().is_kw("auto") ||
         cur().is_kw("register")) {
    storage = true;
    storage_kw = cur().text;
    bump();
  }
  while (cur().is_kw("const") || cur().is_kw("volatile")) {
    qualified = true;
    bump();
  }

  TypePtr base = parse_type_specifier();
  if (!base) return false;
  Declarator d;
  if (!parse_declarator(base, &d)) return false;

  if (d.is_func) {
    FuncDef f;
    f.name = d.name;
    f.ret = d.type->elem;
    f.params = d.params;
    f.is_varargs = d.varargs;
    f.span = d.span;
    if (accept_punct(";")) {
      f.is_extern = true;  // prototype: an external function
      prog_.funcs.push_back(std::move(f));
      return true;
    }
    if (!cur().is_punct("{")) {
      error("expected ';' or function body");
      return false;
    }
    bump();  // {
    // Leading declarations are the function's locals.
    while (at_type_start() && !cur().is_kw("extern") && !cur().is_kw("static") &&
           !cur().is_kw("typedef") && !cur().is_kw("auto") &&
           !cur().is_kw("register") && !cur().is_kw("const") &&
           !cur().is_kw("volatile")) {
      TypePtr lbase = parse_type_specifier();
      if (!lbase) return false;
      Declarator ld;
      if (!parse_declarator(lbase, &ld)) return false;
      std::vector<VarDecl> group;
      if (!parse_var_decl_group(lbase, ld, false, "", false, &group))
        return false;
      for (auto& g : group) f.locals.push_back(std::move(g));
    }
    while (!cur().is_punct("}") && cur().kind != Tok::End) {
      if (at_type_start()) {
        // Declaration after statements: keep as a Decl statement (item 10).
        auto ds = make_stmt(StmtKind::Decl, here());
        bool st = false, q = false;
        std::string skw;
        while (cur().is_kw("typedef") || cur().is_kw("extern") ||
               cur().is_kw("static") || cur().is_kw("auto") ||
               cur().is_kw("register")) {
          st = true;
          skw = cur().text;
          bump();
        }
        while (cur().is_kw("const") || cur().is_kw("volatile")) {
          q = true;
          bump();
        }
        TypePtr lbase = parse_type_specifier();
        if (!lbase) return false;
        Declarator ld;
        if (!parse_declarator(lbase, &ld)) return false;
        if (!parse_var_decl_group(lbase, ld, st, skw, q, &ds->decls))
          return false;
        f.body.push_back(ds);
        continue;
      }
      StmtPtr s = parse_stmt();
      if (!s) return false;
      f.body.push_back(s);
    }
    if (!expect_punct("}")) return false;
    prog_.funcs.push_back(std::move(f));
    return true;
  }

  return parse_var_decl_group(base, d, storage, storage_kw, qualified,
                              &prog_.globals);
}

std::optional<Program> Parser::parse() {
  prog_.file = file_;
  while (cur().kind != Tok::End && !failed_) {
    if (!parse_top_level()) break;
  }
  if (failed_ || sink_.has_errors()) return std::nullopt;
  return std::move(prog_);
}

}  // namespace

std::optional<Program> parse_program(const std::string& src,
                                     const std::string& file,
                                     DiagnosticSink& sink) {
  auto toks = tokenize(src, file, sink);
  if (sink.has_errors()) return std::nullopt;
  Parser p(std::move(toks), file, sink);
  return p.parse();
}

}  // namespace c2m::xdc
