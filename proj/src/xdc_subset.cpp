#include <functional>
#include <map>

#include "c2m/xdc_frontend.hpp"

// Restriction checker. Walks the (superset) AST and reports every construct
// on the exclusion list with its item code:
//   (1) goto           (2) union            (3) prefix ++/--
//   (4) comma exprs    (5) compound assign  (6) struct assignment
//   (7) x=y=z chains   (8) storage classes  (9) const/volatile
//   (10) block locals  (11) nested switch   (12) assignment in conditions
//   (13) function pointers to external functions   (14) varargs

namespace c2m::xdc {

namespace {

class SubsetChecker {
 public:
  SubsetChecker(const Program& p, DiagnosticSink& sink)
      : prog_(p), sink_(sink) {}

  bool run() {
    for (const auto& s : prog_.structs)
      if (s.is_union)
        flag(s.span, 2, "union types are not supported");
    for (const auto& g : prog_.globals) check_decl(g, /*in_block=*/false);
    for (const auto& f : prog_.funcs) check_func(f);
    return clean_;
  }

 private:
  const Program& prog_;
  DiagnosticSink& sink_;
  bool clean_ = true;
  std::map<std::string, TypePtr> scope_;  // current function's visible vars

  void flag(Span sp, int item, const std::string& msg) {
    sink_.error(prog_.file, sp, msg, item);
    clean_ = false;
  }

  bool is_extern_func(const std::string& n) const {
    const FuncDef* f = prog_.find_func(n);
    return f && f->is_extern;
  }

  // Best-effort type resolution for lvalue shapes; nullptr when unknown.
  TypePtr type_of(const ExprPtr& e) const {
    if (!e) return nullptr;
    switch (e->kind) {
      case ExprKind::Var: {
        auto it = scope_.find(e->name);
        return it == scope_.end() ? nullptr : it->second;
      }
      case ExprKind::Index: {
        TypePtr t = type_of(e->kids[0]);
        return (t && (t->kind == TypeKind::Array || t->kind == TypeKind::Pointer))
                   ? t->elem
                   : nullptr;
      }
      case ExprKind::Field:
      case ExprKind::Arrow: {
        TypePtr t = type_of(e->kids[0]);
        if (e->kind == ExprKind::Arrow && t && t->kind == TypeKind::Pointer)
          t = t->elem;
        if (!t || t->kind != TypeKind::Struct) return nullptr;
        const StructDef* sd = prog_.find_struct(t->struct_name);
        if (!sd) return nullptr;
        for (const auto& f : sd->fields)
          if (f.name == e->name) return f.type;
        return nullptr;
      }
      case ExprKind::Unary:
        if (e->name == "cast") return e->type;
        if (e->un_op == UnOp::Deref) {
          TypePtr t = type_of(e->kids[0]);
          return (t && t->kind == TypeKind::Pointer) ? t->elem : nullptr;
        }
        return nullptr;
      default:
        return nullptr;
    }
  }

  void check_decl(const VarDecl& d, bool in_block) {
    if (d.storage_class)
      flag(d.span, 8, "storage-class specifier '" + d.storage_kw +
                          "' is not supported");
    if (d.qualified)
      flag(d.span, 9, "type qualifiers (const/volatile) are not supported");
    if (in_block)
      flag(d.span, 10, "local variable declared inside a block");
    if (d.type && d.type->kind == TypeKind::Struct) {
      const StructDef* sd = prog_.find_struct(d.type->struct_name);
      if (sd && sd->is_union)
        flag(d.span, 2, "union types are not supported");
    }
    if (d.init) check_func_ptr_init(d, d.init);
    if (d.init) check_expr(d.init, /*in_cond=*/false);
    for (const auto& i : d.init_list) check_expr(i, false);
  }

  void check_func_ptr_init(const VarDecl& d, const ExprPtr& init) {
    if (!d.type || d.type->kind != TypeKind::Pointer || !d.type->elem ||
        d.type->elem->kind != TypeKind::Func)
      return;
    const Expr* e = init.get();
    if (e->kind == ExprKind::Unary && e->un_op == UnOp::AddrOf)
      e = e->kids[0].get();
    if (e->kind == ExprKind::Var && is_extern_func(e->name))
      flag(init->span, 13,
           "function pointer may not refer to the external function '" +
               e->name + "'");
  }

  void check_assignment(const ExprPtr& lhs, const ExprPtr& rhs, Span sp) {
    TypePtr lt = type_of(lhs);
    if (lt && lt->kind == TypeKind::Struct)
      flag(sp, 6, "whole-struct assignment is not supported");
    if (rhs && rhs->kind == ExprKind::Assign)
      flag(rhs->span, 7, "chained assignment (x = y = z) is not supported");
    // Function-pointer assignment to an extern function.
    if (lt && lt->kind == TypeKind::Pointer && lt->elem &&
        lt->elem->kind == TypeKind::Func && rhs) {
      const Expr* e = rhs.get();
      if (e->kind == ExprKind::Unary && e->un_op == UnOp::AddrOf)
        e = e->kids[0].get();
      if (e->kind == ExprKind::Var && is_extern_func(e->name))
        flag(rhs->span, 13,
             "function pointer may not refer to the external function '" +
                 e->name + "'");
    }
  }

  void check_expr(const ExprPtr& e, bool in_cond) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::Comma:
        flag(e->span, 4, "comma expressions are not supported");
        break;
      case ExprKind::CompoundAssign:
        flag(e->span, 5, "compound assignment operator '" + e->name +
                             "' is not supported");
        break;
      case ExprKind::Assign:
        if (in_cond)
          flag(e->span, 12, "assignment inside a condition is not supported");
        else
          flag(e->span, 7, "assignment used as a sub-expression");
        check_assignment(e->kids[0], e->kids[1], e->span);
        break;
      case ExprKind::Unary:
        if (e->name != "cast" &&
            (e->un_op == UnOp::PreInc || e->un_op == UnOp::PreDec))
          flag(e->span, 3, "prefix increment/decrement is not supported");
        break;
      default:
        break;
    }
    for (const auto& k : e->kids) check_expr(k, in_cond);
  }

  void check_cond(const ExprPtr& c) {
    if (!c) return;
    check_expr(c, /*in_cond=*/true);
  }

  void check_stmt(const StmtPtr& s, bool in_switch) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Goto:
      case StmtKind::Label:
        flag(s->span, 1, "goto statements and labels are not supported");
        break;
      case StmtKind::Decl:
        for (const auto& d : s->decls) check_decl(d, /*in_block=*/true);
        break;
      case StmtKind::ExprAssign:
        check_assignment(s->lhs, s->expr, s->span);
        check_expr(s->lhs, false);
        check_expr(s->expr, false);
        break;
      case StmtKind::ExprStmt:
        check_expr(s->expr, false);
        break;
      case StmtKind::Switch:
        if (in_switch)
          flag(s->span, 11, "nested switch statements are not supported");
        check_cond(s->cond);
        for (const auto& c : s->cases)
          for (const auto& k : c.body) check_stmt(k, /*in_switch=*/true);
        return;
      case StmtKind::If:
      case StmtKind::While:
      case StmtKind::DoWhile:
        check_cond(s->cond);
        break;
      case StmtKind::For:
        check_stmt(s->for_init, in_switch);
        check_cond(s->cond);
        check_stmt(s->for_step, in_switch);
        break;
      case StmtKind::Return:
        check_expr(s->expr, false);
        break;
      case StmtKind::CallStmt:
        check_expr(s->expr, false);
        break;
      case StmtKind::PostInc:
      case StmtKind::PostDec:
        check_expr(s->lhs, false);
        break;
      default:
        break;
    }
    for (const auto& k : s->body) check_stmt(k, in_switch);
    for (const auto& k : s->else_body) check_stmt(k, in_switch);
  }

  void check_func(const FuncDef& f) {
    if (f.is_varargs)
      flag(f.span, 14, "variadic functions are not supported");
    scope_.clear();
    for (const auto& g : prog_.globals) scope_[g.name] = g.type;
    for (const auto& p : f.params) scope_[p.name] = p.type;
    for (const auto& l : f.locals) scope_[l.name] = l.type;
    for (const auto& l : f.locals) check_decl(l, /*in_block=*/false);
    for (const auto& s : f.body) check_stmt(s, /*in_switch=*/false);
  }
};

}  // namespace

bool check_subset(const Program& p, DiagnosticSink& sink) {
  SubsetChecker c(p, sink);
  return c.run();
}

}  // namespace c2m::xdc
