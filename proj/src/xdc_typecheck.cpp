#include <map>

#include "c2m/xdc_frontend.hpp"

// Strict type checking: no implicit arithmetic promotions. Binary operands
// must agree in width and signedness (integers of equal width/signedness are
// compatible even under different spellings, e.g. int vs long in the 32-bit
// model); pointer arithmetic follows the pointer ± integer forms. Assignment
// and argument passing use the store conversion (arithmetic conversions are
// applied there, as in C).

namespace c2m::xdc {

namespace {

// Arithmetic class for strict operand agreement.
struct ACls {
  enum class K { Int, F32, F64 } k;
  int width = 32;
  bool sgn = true;
  bool operator==(const ACls& o) const {
    return k == o.k && (k != K::Int || (width == o.width && sgn == o.sgn));
  }
};

bool acls(const TypePtr& t, ACls* out) {
  if (!t) return false;
  if (t->is_integer()) {
    *out = {ACls::K::Int, t->int_width(), t->int_signed()};
    return true;
  }
  if (t->kind == TypeKind::Float) { *out = {ACls::K::F32}; return true; }
  if (t->kind == TypeKind::Double) { *out = {ACls::K::F64}; return true; }
  return false;
}

class Checker {
 public:
  Checker(Program& p, DiagnosticSink& sink) : prog_(p), sink_(sink) {}

  bool run() {
    for (auto& sd : prog_.structs) check_struct(sd);
    for (auto& g : prog_.globals) declare_global(g);
    for (auto& f : prog_.funcs) {
      if (prog_.find_func(f.name) != &f)
        err(f.span, "redefinition of function '" + f.name + "'");
    }
    for (auto& g : prog_.globals) check_init(g, /*global=*/true);
    for (auto& f : prog_.funcs)
      if (!f.is_extern) check_func(f);
    return ok_;
  }

 private:
  Program& prog_;
  DiagnosticSink& sink_;
  bool ok_ = true;
  std::map<std::string, TypePtr> globals_;
  std::map<std::string, TypePtr> locals_;
  const FuncDef* cur_func_ = nullptr;

  void err(Span sp, const std::string& m) {
    sink_.error(prog_.file, sp, m);
    ok_ = false;
  }

  TypePtr decay(const TypePtr& t) {
    if (t && t->kind == TypeKind::Array) return make_ptr(t->elem);
    return t;
  }

  bool complete_type(const TypePtr& t, Span sp) {
    if (!t) return false;
    switch (t->kind) {
      case TypeKind::Void:
        err(sp, "variable of type void");
        return false;
      case TypeKind::Struct:
        if (!prog_.find_struct(t->struct_name)) {
          err(sp, "unknown struct '" + t->struct_name + "'");
          return false;
        }
        return true;
      case TypeKind::Array:
        if (t->array_size <= 0) {
          err(sp, "array bound must be positive");
          return false;
        }
        return complete_type(t->elem, sp);
      case TypeKind::Pointer:
        return true;
      default:
        return true;
    }
  }

  void check_struct(const StructDef& sd) {
    for (const auto& f : sd.fields) complete_type(f.type, sd.span);
  }

  void declare_global(const VarDecl& g) {
    if (globals_.count(g.name)) err(g.span, "redefinition of '" + g.name + "'");
    complete_type(g.type, g.span);
    globals_[g.name] = g.type;
  }

  TypePtr lookup(const std::string& n, Span sp) {
    auto it = locals_.find(n);
    if (it != locals_.end()) return it->second;
    it = globals_.find(n);
    if (it != globals_.end()) return it->second;
    if (const FuncDef* f = prog_.find_func(n)) {
      auto ft = make_type(TypeKind::Func);
      ft->elem = f->ret;
      for (const auto& p : f->params) ft->params.push_back(p.type);
      return ft;
    }
    err(sp, "use of undeclared identifier '" + n + "'");
    return nullptr;
  }

  // Store conversion (assignment / argument / return / initializer).
  bool store_compatible(const TypePtr& dst, const ExprPtr& src_e,
                        const TypePtr& src_raw, Span sp, const char* what) {
    TypePtr src = decay(src_raw);
    if (!dst || !src) return false;
    if (dst->is_arith() && src->is_arith()) return true;
    if (dst->kind == TypeKind::Pointer) {
      if (src->kind == TypeKind::Pointer) {
        if (type_equal(dst, src)) return true;
        // void* converts freely.
        if (dst->elem->kind == TypeKind::Void || src->elem->kind == TypeKind::Void)
          return true;
        err(sp, std::string(what) + ": incompatible pointer types " +
                    dst->show() + " and " + src->show());
        return false;
      }
      if (src->kind == TypeKind::Func) return true;  // checked structurally below
      if (src_e && src_e->kind == ExprKind::IntLit && src_e->int_val == 0)
        return true;  // null pointer constant
      err(sp, std::string(what) + ": cannot convert " + src->show() +
                  " to " + dst->show());
      return false;
    }
    if (dst->kind == TypeKind::Struct) {
      err(sp, std::string(what) + ": struct values cannot be assigned");
      return false;
    }
    err(sp, std::string(what) + ": cannot convert " + src->show() + " to " +
                dst->show());
    return false;
  }

  bool is_lvalue(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::Var: {
        // Function designators are not assignable.
        if (!locals_.count(e->name) && !globals_.count(e->name)) return false;
        return true;
      }
      case ExprKind::Index:
      case ExprKind::Field:
      case ExprKind::Arrow:
        return true;
      case ExprKind::Unary:
        return e->name != "cast" && e->un_op == UnOp::Deref;
      default:
        return false;
    }
  }

  TypePtr infer(const ExprPtr& e) {
    if (!e) return nullptr;
    TypePtr t = infer_inner(e);
    e->type = t;
    return t;
  }

  TypePtr infer_inner(const ExprPtr& e) {
    switch (e->kind) {
      case ExprKind::IntLit:
        if (e->int_val > 2147483647ll || e->int_val < -2147483648ll)
          err(e->span, "integer constant out of 32-bit range");
        return make_type(TypeKind::Int);
      case ExprKind::CharLit: return make_type(TypeKind::Char);
      case ExprKind::FloatLit: return make_type(TypeKind::Double);
      case ExprKind::Var: return lookup(e->name, e->span);
      case ExprKind::Index: {
        TypePtr base = infer(e->kids[0]);
        TypePtr idx = infer(e->kids[1]);
        if (!base || !idx) return nullptr;
        if (base->kind != TypeKind::Array && base->kind != TypeKind::Pointer) {
          err(e->span, "subscripted value is not an array or pointer");
          return nullptr;
        }
        if (!idx->is_integer()) {
          err(e->span, "array index must be an integer");
          return nullptr;
        }
        return base->elem;
      }
      case ExprKind::Field:
      case ExprKind::Arrow: {
        TypePtr base = infer(e->kids[0]);
        if (!base) return nullptr;
        if (e->kind == ExprKind::Arrow) {
          if (base->kind != TypeKind::Pointer) {
            err(e->span, "'->' applied to non-pointer");
            return nullptr;
          }
          base = base->elem;
        }
        if (base->kind != TypeKind::Struct) {
          err(e->span, "member access on non-struct value");
          return nullptr;
        }
        const StructDef* sd = prog_.find_struct(base->struct_name);
        if (!sd) {
          err(e->span, "unknown struct '" + base->struct_name + "'");
          return nullptr;
        }
        for (const auto& f : sd->fields)
          if (f.name == e->name) return f.type;
        err(e->span, "struct '" + base->struct_name + "' has no field '" +
                         e->name + "' (field_offset undefined)");
        return nullptr;
      }
      case ExprKind::Unary: {
        if (e->name == "cast") {
          TypePtr inner = infer(e->kids[0]);
          if (!inner) return nullptr;
          TypePtr target = e->type;
          TypePtr din = decay(inner);
          bool ok = (target->is_arith() && din->is_arith()) ||
                    (target->kind == TypeKind::Pointer &&
                     (din->kind == TypeKind::Pointer ||
                      (e->kids[0]->kind == ExprKind::IntLit &&
                       e->kids[0]->int_val == 0)));
          if (!ok) err(e->span, "invalid cast from " + din->show() + " to " +
                                    target->show());
          return target;
        }
        TypePtr k = infer(e->kids[0]);
        if (!k) return nullptr;
        switch (e->un_op) {
          case UnOp::Neg:
            if (!k->is_arith()) { err(e->span, "unary '-' needs an arithmetic operand"); return nullptr; }
            return k;
          case UnOp::Not:
            if (!decay(k)->is_scalar()) { err(e->span, "'!' needs a scalar operand"); return nullptr; }
            return make_type(TypeKind::Int);
          case UnOp::BitNot:
            if (!k->is_integer()) { err(e->span, "'~' needs an integer operand"); return nullptr; }
            return k;
          case UnOp::Deref: {
            TypePtr dk = decay(k);
            if (dk->kind != TypeKind::Pointer) {
              err(e->span, "cannot dereference non-pointer");
              return nullptr;
            }
            return dk->elem;
          }
          case UnOp::AddrOf:
            if (e->kids[0]->kind == ExprKind::Var &&
                prog_.find_func(e->kids[0]->name) &&
                !locals_.count(e->kids[0]->name) &&
                !globals_.count(e->kids[0]->name)) {
              // &f on a function: function pointer.
              return make_ptr(infer(e->kids[0]));
            }
            if (!is_lvalue(e->kids[0])) {
              err(e->span, "'&' needs an lvalue operand");
              return nullptr;
            }
            return make_ptr(k);
          case UnOp::PreInc:
          case UnOp::PreDec:
            err(e->span, "prefix increment/decrement is not supported");
            return nullptr;
        }
        return nullptr;
      }
      case ExprKind::Binary: {
        TypePtr a = infer(e->kids[0]);
        TypePtr b = infer(e->kids[1]);
        if (!a || !b) return nullptr;
        TypePtr da = decay(a), db = decay(b);
        BinOp op = e->bin_op;
        auto strict_arith = [&](bool ints_only) -> TypePtr {
          ACls ca, cb;
          if (!acls(da, &ca) || !acls(db, &cb)) {
            err(e->span, "operands must be arithmetic (" + da->show() +
                             ", " + db->show() + ")");
            return nullptr;
          }
          if (ints_only && (ca.k != ACls::K::Int || cb.k != ACls::K::Int)) {
            err(e->span, "integer operands required");
            return nullptr;
          }
          if (!(ca == cb)) {
            err(e->span, "mixed operand types (" + da->show() + ", " +
                             db->show() + ") require an explicit cast");
            return nullptr;
          }
          return da;
        };
        switch (op) {
          case BinOp::Add:
            if (da->kind == TypeKind::Pointer && db->is_integer()) return da;
            if (da->is_integer() && db->kind == TypeKind::Pointer) return db;
            return strict_arith(false);
          case BinOp::Sub:
            if (da->kind == TypeKind::Pointer && db->is_integer()) return da;
            return strict_arith(false);
          case BinOp::Mul:
          case BinOp::Div:
            return strict_arith(false);
          case BinOp::Mod:
          case BinOp::Shl:
          case BinOp::Shr:
          case BinOp::BitAnd:
          case BinOp::BitOr:
          case BinOp::BitXor:
            return strict_arith(true);
          case BinOp::Lt: case BinOp::Gt: case BinOp::Le: case BinOp::Ge:
          case BinOp::Eq: case BinOp::Ne: {
            if (da->kind == TypeKind::Pointer || db->kind == TypeKind::Pointer) {
              bool null_a = e->kids[0]->kind == ExprKind::IntLit &&
                            e->kids[0]->int_val == 0;
              bool null_b = e->kids[1]->kind == ExprKind::IntLit &&
                            e->kids[1]->int_val == 0;
              if (!(type_equal(da, db) || null_a || null_b ||
                    (da->kind == TypeKind::Pointer &&
                     db->kind == TypeKind::Pointer &&
                     (da->elem->kind == TypeKind::Void ||
                      db->elem->kind == TypeKind::Void)))) {
                err(e->span, "incomparable pointer types");
                return nullptr;
              }
              return make_type(TypeKind::Int);
            }
            if (!strict_arith(false)) return nullptr;
            return make_type(TypeKind::Int);
          }
          case BinOp::LogAnd:
          case BinOp::LogOr:
            if (!da->is_scalar() || !db->is_scalar()) {
              err(e->span, "logical operators need scalar operands");
              return nullptr;
            }
            return make_type(TypeKind::Int);
        }
        return nullptr;
      }
      case ExprKind::Cond: {
        TypePtr c = infer(e->kids[0]);
        TypePtr a = infer(e->kids[1]);
        TypePtr b = infer(e->kids[2]);
        if (!c || !a || !b) return nullptr;
        if (!decay(c)->is_scalar()) {
          err(e->span, "condition must be scalar");
          return nullptr;
        }
        TypePtr da = decay(a), db = decay(b);
        if (!type_equal(da, db)) {
          err(e->span, "conditional arms must have the same type");
          return nullptr;
        }
        return da;
      }
      case ExprKind::Call: {
        const ExprPtr& callee = e->kids[0];
        TypePtr ft;
        if (callee->kind == ExprKind::Var) {
          ft = lookup(callee->name, callee->span);
          callee->type = ft;
        } else {
          err(e->span, "called object must be a function name or function-pointer variable");
          return nullptr;
        }
        if (!ft) return nullptr;
        if (ft->kind == TypeKind::Pointer && ft->elem &&
            ft->elem->kind == TypeKind::Func)
          ft = ft->elem;
        if (ft->kind != TypeKind::Func) {
          err(e->span, "called object is not a function");
          return nullptr;
        }
        size_t nargs = e->kids.size() - 1;
        if (nargs != ft->params.size()) {
          err(e->span, "call supplies " + std::to_string(nargs) +
                           " argument(s), expected " +
                           std::to_string(ft->params.size()));
          return nullptr;
        }
        for (size_t i = 0; i < nargs; ++i) {
          TypePtr at = infer(e->kids[i + 1]);
          if (!at) return nullptr;
          store_compatible(ft->params[i], e->kids[i + 1], at,
                           e->kids[i + 1]->span, "argument");
        }
        return ft->elem;
      }
      case ExprKind::PostIncDec:
        err(e->span, "'++'/'--' may only appear as a whole statement");
        return nullptr;
      case ExprKind::Assign:
      case ExprKind::CompoundAssign:
      case ExprKind::Comma:
        // Flagged by the subset checker; give operands types for later passes.
        for (const auto& k : e->kids) infer(k);
        return e->kids.empty() ? nullptr : e->kids.back()->type;
    }
    return nullptr;
  }

  void check_cond_expr(const ExprPtr& c) {
    TypePtr t = infer(c);
    if (t && !decay(t)->is_scalar()) err(c->span, "condition must be scalar");
  }

  void check_stmt(const StmtPtr& s) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::ExprAssign: {
        TypePtr lt = infer(s->lhs);
        TypePtr rt = infer(s->expr);
        if (!lt || !rt) return;
        if (!is_lvalue(s->lhs)) {
          err(s->span, "assignment target is not an lvalue");
          return;
        }
        if (lt->kind == TypeKind::Array) {
          err(s->span, "arrays cannot be assigned");
          return;
        }
        if (lt->kind == TypeKind::Struct) return;  // item 6, already flagged
        store_compatible(lt, s->expr, rt, s->span, "assignment");
        return;
      }
      case StmtKind::PostInc:
      case StmtKind::PostDec: {
        TypePtr lt = infer(s->lhs);
        if (!lt) return;
        if (!is_lvalue(s->lhs)) {
          err(s->span, "'++'/'--' target is not an lvalue");
          return;
        }
        if (!lt->is_integer() && lt->kind != TypeKind::Pointer)
          err(s->span, "'++'/'--' needs an integer or pointer target");
        return;
      }
      case StmtKind::CallStmt:
        infer(s->expr);
        return;
      case StmtKind::ExprStmt:
        infer(s->expr);
        return;
      case StmtKind::If:
        check_cond_expr(s->cond);
        break;
      case StmtKind::While:
      case StmtKind::DoWhile:
        check_cond_expr(s->cond);
        break;
      case StmtKind::For:
        if (s->for_init) check_stmt(s->for_init);
        if (s->cond) check_cond_expr(s->cond);
        if (s->for_step) check_stmt(s->for_step);
        break;
      case StmtKind::Switch: {
        TypePtr t = infer(s->cond);
        if (t && !t->is_integer())
          err(s->span, "switch scrutinee must be an integer");
        for (const auto& c : s->cases)
          for (const auto& k : c.body) check_stmt(k);
        return;
      }
      case StmtKind::Return: {
        if (!cur_func_) return;
        if (cur_func_->ret->kind == TypeKind::Void) {
          if (s->expr) err(s->span, "void function returns a value");
          return;
        }
        if (!s->expr) {
          err(s->span, "non-void function must return a value");
          return;
        }
        TypePtr rt = infer(s->expr);
        if (rt) store_compatible(cur_func_->ret, s->expr, rt, s->span, "return");
        return;
      }
      case StmtKind::Decl:
        for (const auto& d : s->decls) {
          complete_type(d.type, d.span);
          locals_[d.name] = d.type;  // diagnose uses even though item 10
        }
        return;
      default:
        break;
    }
    for (const auto& k : s->body) check_stmt(k);
    for (const auto& k : s->else_body) check_stmt(k);
  }

  void check_init(VarDecl& d, bool global) {
    (void)global;
    if (d.has_init_list) {
      if (d.type->kind == TypeKind::Array) {
        if (static_cast<int>(d.init_list.size()) > d.type->array_size)
          err(d.span, "too many initializers for array");
        for (auto& i : d.init_list) {
          TypePtr it = infer(i);
          if (it) store_compatible(d.type->elem, i, it, i->span, "initializer");
        }
      } else if (d.type->kind == TypeKind::Struct) {
        const StructDef* sd = prog_.find_struct(d.type->struct_name);
        if (sd && d.init_list.size() > sd->fields.size())
          err(d.span, "too many initializers for struct");
        for (size_t i = 0; sd && i < d.init_list.size(); ++i) {
          TypePtr it = infer(d.init_list[i]);
          if (it)
            store_compatible(sd->fields[i].type, d.init_list[i], it,
                             d.init_list[i]->span, "initializer");
        }
      } else {
        err(d.span, "brace initializer on a scalar");
      }
      return;
    }
    if (d.init) {
      TypePtr it = infer(d.init);
      if (it) store_compatible(d.type, d.init, it, d.init->span, "initializer");
    }
  }

  void check_func(FuncDef& f) {
    cur_func_ = &f;
    locals_.clear();
    for (const auto& p : f.params) {
      if (locals_.count(p.name)) err(p.span, "duplicate parameter '" + p.name + "'");
      complete_type(p.type, p.span);
      locals_[p.name] = p.type;
    }
    for (auto& l : f.locals) {
      if (locals_.count(l.name)) err(l.span, "redefinition of '" + l.name + "'");
      complete_type(l.type, l.span);
      locals_[l.name] = l.type;
    }
    for (auto& l : f.locals) check_init(l, false);
    for (const auto& s : f.body) check_stmt(s);
    cur_func_ = nullptr;
  }
};

}  // namespace

bool typecheck(Program& p, DiagnosticSink& sink) {
  Checker c(p, sink);
  return c.run();
}

std::optional<Program> analyze(const std::string& src, const std::string& file,
                               DiagnosticSink& sink) {
  auto prog = parse_program(src, file, sink);
  if (!prog) return std::nullopt;
  bool clean = check_subset(*prog, sink);
  if (!typecheck(*prog, sink)) return std::nullopt;
  if (!clean) return std::nullopt;
  return prog;
}

}  // namespace c2m::xdc
