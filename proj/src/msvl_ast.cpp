#include "c2m/msvl_ast.hpp"

namespace c2m::msvl {

ExprPtr make_expr(ExprKind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

ExprPtr var(const std::string& n) {
  auto e = make_expr(ExprKind::Var);
  e->name = n;
  return e;
}

ExprPtr int_lit(int64_t n) {
  auto e = make_expr(ExprKind::IntLit);
  e->int_val = n;
  return e;
}

ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b) {
  auto e = make_expr(ExprKind::Binary);
  e->bin_op = op;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

StmtPtr make_stmt(StmtKind k) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  return s;
}

StmtPtr chop2(StmtPtr a, StmtPtr b) {
  if (!a) return b;
  if (!b) return a;
  auto s = make_stmt(StmtKind::Chop);
  auto push = [&](StmtPtr x) {
    if (x->kind == StmtKind::Chop)
      for (auto& k : x->kids) s->kids.push_back(k);
    else
      s->kids.push_back(std::move(x));
  };
  push(std::move(a));
  push(std::move(b));
  return s;
}

StmtPtr and2(StmtPtr a, StmtPtr b) {
  if (!a) return b;
  if (!b) return a;
  auto s = make_stmt(StmtKind::And);
  auto push = [&](StmtPtr x) {
    if (x->kind == StmtKind::And)
      for (auto& k : x->kids) s->kids.push_back(k);
    else
      s->kids.push_back(std::move(x));
  };
  push(std::move(a));
  push(std::move(b));
  return s;
}

const Func* Program::find_func(const std::string& n) const {
  for (const auto& f : funcs)
    if (f.name == n) return &f;
  return nullptr;
}

const StructDef* Program::find_struct(const std::string& n) const {
  for (const auto& s : structs)
    if (s.name == n) return &s;
  return nullptr;
}

int count_nodes(const Expr& e) {
  int n = 1;
  for (const auto& k : e.kids)
    if (k) n += count_nodes(*k);
  return n;
}

int count_nodes(const Stmt& s) {
  int n = 1;
  auto add_e = [&](const ExprPtr& e) { if (e) n += count_nodes(*e); };
  add_e(s.lhs);
  add_e(s.rhs);
  add_e(s.cond);
  for (const auto& e : s.init_list) add_e(e);
  for (const auto& e : s.args) add_e(e);
  for (const auto& k : s.kids)
    if (k) n += count_nodes(*k);
  return n;
}

int count_nodes(const Program& p) {
  int n = 0;
  for (const auto& s : p.structs) n += 1 + static_cast<int>(s.fields.size());
  for (const auto& g : p.globals)
    if (g) n += count_nodes(*g);
  for (const auto& f : p.funcs) {
    n += 1 + static_cast<int>(f.params.size());
    if (f.body) n += count_nodes(*f.body);
  }
  if (p.body) n += count_nodes(*p.body);
  return n;
}

}  // namespace c2m::msvl
