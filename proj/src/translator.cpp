#include <set>

#include "c2m/translator.hpp"
#include "c2m/xdc_frontend.hpp"

// Structure-directed translation. Control transfers become the flag
// variables break/continue/return (plus switch for fall-through and RVal for
// return values); sequencing guards later statements on the flags a prefix
// statement may set, loops fold the flags into their conditions, and switch
// becomes a guarded if-chain.

namespace c2m {

namespace {

using xdc::StmtKind;
using xdc::TypeKind;

// Target-language reserved words that force the "_v" rename.
const std::set<std::string> kMsvlReserved = {
    "empty", "skip", "more", "and", "or", "ext", "if", "then", "else",
    "while", "function", "struct", "true", "false", "prev", "alw", "next",
    "RVal",
};

enum class Jump { Break, Return, Continue };

bool contains_jump(const xdc::StmtPtr& s, Jump j);

bool contains_jump_seq(const std::vector<xdc::StmtPtr>& seq, Jump j) {
  for (const auto& s : seq)
    if (contains_jump(s, j)) return true;
  return false;
}

// Whether executing `s` can set the given flag in a way that escapes `s`
// itself (loops capture their own break/continue; switch captures break).
bool contains_jump(const xdc::StmtPtr& s, Jump j) {
  if (!s) return false;
  switch (s->kind) {
    case StmtKind::Break: return j == Jump::Break;
    case StmtKind::Continue: return j == Jump::Continue;
    case StmtKind::Return: return j == Jump::Return;
    case StmtKind::Block: return contains_jump_seq(s->body, j);
    case StmtKind::If:
      return contains_jump_seq(s->body, j) ||
             contains_jump_seq(s->else_body, j);
    case StmtKind::While:
    case StmtKind::DoWhile:
    case StmtKind::For:
      return j == Jump::Return && contains_jump_seq(s->body, j);
    case StmtKind::Switch: {
      if (j == Jump::Break) return false;
      for (const auto& c : s->cases)
        if (contains_jump_seq(c.body, j)) return true;
      return false;
    }
    default: return false;
  }
}

msvl::StmtPtr unit_assign(const std::string& name, int64_t v) {
  auto s = msvl::make_stmt(msvl::StmtKind::UnitAssign);
  s->lhs = msvl::var(name);
  s->rhs = msvl::int_lit(v);
  return s;
}

msvl::ExprPtr flag_is(const std::string& name, int64_t v) {
  return msvl::binary(msvl::BinOp::Eq, msvl::var(name), msvl::int_lit(v));
}

msvl::StmtPtr guarded(msvl::ExprPtr cond, msvl::StmtPtr then_s) {
  auto s = msvl::make_stmt(msvl::StmtKind::If);
  s->cond = std::move(cond);
  s->kids = {std::move(then_s), msvl::make_stmt(msvl::StmtKind::Empty)};
  return s;
}

}  // namespace

std::string mapped_name(const std::string& n) {
  if (kMsvlReserved.count(n)) return n + "_v";
  return n;
}

std::string Translator::map_name(const std::string& n) const {
  return mapped_name(n);
}

msvl::TypePtr Translator::map_type(const xdc::TypePtr& t) const {
  return t;  // the type language is shared; spellings map one-to-one
}

bool Translator::is_extern_func(const std::string& n) const {
  const xdc::FuncDef* f = prog_.find_func(n);
  return f && f->is_extern;
}

bool Translator::returns_value(const std::string& n) const {
  const xdc::FuncDef* f = prog_.find_func(n);
  return f && f->ret && f->ret->kind != TypeKind::Void;
}

msvl::ExprPtr Translator::vl_tr(const xdc::ExprPtr& le) { return ex_tr(le); }

msvl::ExprPtr Translator::ex_tr(const xdc::ExprPtr& e) {
  using xdc::ExprKind;
  if (!e) return nullptr;
  switch (e->kind) {
    case ExprKind::IntLit:
      return msvl::int_lit(e->int_val);
    case ExprKind::CharLit: {
      // Character constants are 8-bit on the source side; keep the width.
      auto m = msvl::make_expr(msvl::ExprKind::Cast);
      m->cast_type = xdc::make_type(TypeKind::Char);
      m->kids = {msvl::int_lit(e->int_val)};
      return m;
    }
    case ExprKind::FloatLit: {
      auto m = msvl::make_expr(msvl::ExprKind::FloatLit);
      m->float_val = e->float_val;
      return m;
    }
    case ExprKind::Var:
      return msvl::var(map_name(e->name));
    case ExprKind::Index: {
      auto m = msvl::make_expr(msvl::ExprKind::Index);
      m->kids = {ex_tr(e->kids[0]), ex_tr(e->kids[1])};
      return m;
    }
    case ExprKind::Field: {
      auto m = msvl::make_expr(msvl::ExprKind::Field);
      m->name = map_name(e->name);
      m->kids = {ex_tr(e->kids[0])};
      return m;
    }
    case ExprKind::Arrow: {
      auto m = msvl::make_expr(msvl::ExprKind::Arrow);
      m->name = map_name(e->name);
      m->kids = {ex_tr(e->kids[0])};
      return m;
    }
    case ExprKind::Unary: {
      if (e->name == "cast") {
        auto m = msvl::make_expr(msvl::ExprKind::Cast);
        m->cast_type = map_type(e->type);
        m->kids = {ex_tr(e->kids[0])};
        return m;
      }
      switch (e->un_op) {
        case xdc::UnOp::Deref: {
          auto m = msvl::make_expr(msvl::ExprKind::Deref);
          m->kids = {ex_tr(e->kids[0])};
          return m;
        }
        case xdc::UnOp::AddrOf: {
          auto m = msvl::make_expr(msvl::ExprKind::AddrOf);
          m->kids = {ex_tr(e->kids[0])};
          return m;
        }
        default: {
          auto m = msvl::make_expr(msvl::ExprKind::Unary);
          m->un_op = e->un_op == xdc::UnOp::Neg   ? msvl::UnOp::Neg
                     : e->un_op == xdc::UnOp::Not ? msvl::UnOp::Not
                                                  : msvl::UnOp::BitNot;
          m->kids = {ex_tr(e->kids[0])};
          return m;
        }
      }
    }
    case ExprKind::Binary: {
      static const std::pair<xdc::BinOp, msvl::BinOp> table[] = {
          {xdc::BinOp::Add, msvl::BinOp::Add},
          {xdc::BinOp::Sub, msvl::BinOp::Sub},
          {xdc::BinOp::Mul, msvl::BinOp::Mul},
          {xdc::BinOp::Div, msvl::BinOp::Div},
          {xdc::BinOp::Mod, msvl::BinOp::Mod},
          {xdc::BinOp::Shl, msvl::BinOp::Shl},
          {xdc::BinOp::Shr, msvl::BinOp::Shr},
          {xdc::BinOp::BitAnd, msvl::BinOp::BitAnd},
          {xdc::BinOp::BitOr, msvl::BinOp::BitOr},
          {xdc::BinOp::BitXor, msvl::BinOp::BitXor},
          {xdc::BinOp::Lt, msvl::BinOp::Lt},
          {xdc::BinOp::Gt, msvl::BinOp::Gt},
          {xdc::BinOp::Le, msvl::BinOp::Le},
          {xdc::BinOp::Ge, msvl::BinOp::Ge},
          {xdc::BinOp::Eq, msvl::BinOp::Eq},
          {xdc::BinOp::Ne, msvl::BinOp::Ne},
          {xdc::BinOp::LogAnd, msvl::BinOp::And},
          {xdc::BinOp::LogOr, msvl::BinOp::Or},
      };
      msvl::BinOp op = msvl::BinOp::Add;
      for (const auto& [c, m] : table)
        if (c == e->bin_op) op = m;
      return msvl::binary(op, ex_tr(e->kids[0]), ex_tr(e->kids[1]));
    }
    case ExprKind::Cond: {
      auto m = msvl::make_expr(msvl::ExprKind::CondExpr);
      m->kids = {ex_tr(e->kids[0]), ex_tr(e->kids[1]), ex_tr(e->kids[2])};
      return m;
    }
    case ExprKind::Call: {
      auto m = msvl::make_expr(msvl::ExprKind::ExtCall);
      bool ext_callee = is_extern_func(e->kids[0]->name);
      // External names bypass the identifier mapping: they must match the
      // environment model and appear verbatim in the trace.
      m->name = ext_callee ? e->kids[0]->name : map_name(e->kids[0]->name);
      for (size_t i = 1; i < e->kids.size(); ++i)
        m->kids.push_back(ex_tr(e->kids[i]));
      // A value-producing call to a defined function (directly or through a
      // function pointer) carries the extra RVal argument; external calls
      // produce their value from the environment model.
      bool external = is_extern_func(e->kids[0]->name);
      if (!external) m->kids.push_back(msvl::var("RVal"));
      return m;
    }
    default:
      return nullptr;  // superset nodes never reach translation
  }
}

msvl::StmtPtr Translator::dec_tr(const xdc::VarDecl& d) {
  auto decl = msvl::make_stmt(msvl::StmtKind::Decl);
  decl->decl_type = map_type(d.type);
  decl->name = map_name(d.name);
  if (d.init) decl->rhs = ex_tr(d.init);
  for (const auto& i : d.init_list) decl->init_list.push_back(ex_tr(i));
  return msvl::and2(decl, msvl::make_stmt(msvl::StmtKind::Skip));
}

msvl::StmtPtr Translator::seq_tr(const std::vector<xdc::StmtPtr>& stmts) {
  if (stmts.empty()) return msvl::make_stmt(msvl::StmtKind::Empty);
  if (stmts.size() == 1) return stmt_tr(stmts[0]);
  auto append_flat = [](msvl::Stmt* chop, msvl::StmtPtr x) {
    if (x->kind == msvl::StmtKind::Chop)
      for (auto& k : x->kids) chop->kids.push_back(k);
    else
      chop->kids.push_back(std::move(x));
  };
  // Fixed nesting order for the continuation guards: break (outermost) →
  // return → continue; same shape as chop_tr, but built front to back into a
  // single flattened chop so long statement lists cost linear time.
  auto wrap_guards = [](const xdc::StmtPtr& first, msvl::StmtPtr w) {
    if (contains_jump(first, Jump::Continue))
      w = guarded(flag_is("continue", 0), w);
    if (contains_jump(first, Jump::Return))
      w = guarded(flag_is("return", 0), w);
    if (contains_jump(first, Jump::Break))
      w = guarded(flag_is("break", 0), w);
    return w;
  };
  msvl::StmtPtr root = msvl::make_stmt(msvl::StmtKind::Chop);
  msvl::Stmt* open = root.get();
  for (size_t i = 0; i < stmts.size(); ++i) {
    const xdc::StmtPtr& s = stmts[i];
    append_flat(open, stmt_tr(s));
    if (i + 1 == stmts.size()) break;
    bool jumps = contains_jump(s, Jump::Continue) ||
                 contains_jump(s, Jump::Return) ||
                 contains_jump(s, Jump::Break);
    if (!jumps) continue;
    if (i + 2 == stmts.size()) {
      // A single remaining statement is guarded directly, with no chop node
      // around it.
      open->kids.push_back(wrap_guards(s, stmt_tr(stmts[i + 1])));
      break;
    }
    auto inner = msvl::make_stmt(msvl::StmtKind::Chop);
    open->kids.push_back(wrap_guards(s, inner));
    open = inner.get();
  }
  return root;
}

msvl::StmtPtr Translator::chop_tr(const xdc::StmtPtr& first,
                                  msvl::StmtPtr rest_tr,
                                  const std::vector<xdc::StmtPtr>&) {
  msvl::StmtPtr wrapped = std::move(rest_tr);
  // Fixed nesting order: break (outermost) → return → continue.
  if (contains_jump(first, Jump::Continue))
    wrapped = guarded(flag_is("continue", 0), wrapped);
  if (contains_jump(first, Jump::Return))
    wrapped = guarded(flag_is("return", 0), wrapped);
  if (contains_jump(first, Jump::Break))
    wrapped = guarded(flag_is("break", 0), wrapped);
  return msvl::chop2(stmt_tr(first), wrapped);
}

msvl::StmtPtr Translator::switch_tr(const xdc::Stmt& sw) {
  msvl::ExprPtr e = ex_tr(sw.cond);
  bool guard_continue = false;
  for (const auto& c : sw.cases)
    if (contains_jump_seq(c.body, Jump::Continue)) guard_continue = true;

  // No-match predicate: the scrutinee differs from every labeled constant.
  // The default arm runs either on fall-through (switch = 1) or when nothing
  // matched at all.
  msvl::ExprPtr no_match;
  for (const auto& c : sw.cases) {
    if (c.is_default) continue;
    auto ne = msvl::binary(msvl::BinOp::Ne, e, msvl::int_lit(c.label));
    no_match = no_match ? msvl::binary(msvl::BinOp::And, no_match, ne) : ne;
  }

  msvl::StmtPtr chain;
  for (const auto& c : sw.cases) {
    msvl::ExprPtr guard;
    if (c.is_default) {
      guard = flag_is("switch", 1);
      if (no_match) guard = msvl::binary(msvl::BinOp::Or, no_match, guard);
    } else {
      guard = msvl::binary(msvl::BinOp::Or,
                           msvl::binary(msvl::BinOp::Eq, e, msvl::int_lit(c.label)),
                           flag_is("switch", 1));
    }
    guard = msvl::binary(msvl::BinOp::And, guard, flag_is("break", 0));
    guard = msvl::binary(msvl::BinOp::And, guard, flag_is("return", 0));
    if (guard_continue)
      guard = msvl::binary(msvl::BinOp::And, guard, flag_is("continue", 0));
    msvl::StmtPtr body = c.body.empty()
                             ? msvl::make_stmt(msvl::StmtKind::Empty)
                             : seq_tr(c.body);
    // Fall-through marker heads every taken arm.
    body = msvl::chop2(unit_assign("switch", 1), body);
    chain = msvl::chop2(chain, guarded(guard, body));
  }
  return chain;
}

msvl::StmtPtr Translator::while_tr(const xdc::Stmt& s) {
  bool b = contains_jump_seq(s.body, Jump::Break);
  bool r = contains_jump_seq(s.body, Jump::Return);
  bool c = contains_jump_seq(s.body, Jump::Continue);
  msvl::ExprPtr cond = ex_tr(s.cond);
  if (b) cond = msvl::binary(msvl::BinOp::And, cond, flag_is("break", 0));
  if (r) cond = msvl::binary(msvl::BinOp::And, cond, flag_is("return", 0));
  msvl::StmtPtr body = seq_tr(s.body);
  if (c) body = msvl::chop2(body, unit_assign("continue", 0));
  auto w = msvl::make_stmt(msvl::StmtKind::While);
  w->cond = cond;
  w->kids = {body};
  msvl::StmtPtr out = w;
  if (b) out = msvl::chop2(out, unit_assign("break", 0));
  return out;
}

msvl::StmtPtr Translator::do_tr(const xdc::Stmt& s) {
  bool b = contains_jump_seq(s.body, Jump::Break);
  bool r = contains_jump_seq(s.body, Jump::Return);
  bool c = contains_jump_seq(s.body, Jump::Continue);
  msvl::StmtPtr once = seq_tr(s.body);
  if (c) once = msvl::chop2(once, unit_assign("continue", 0));
  msvl::ExprPtr cond = ex_tr(s.cond);
  if (b) cond = msvl::binary(msvl::BinOp::And, cond, flag_is("break", 0));
  if (r) cond = msvl::binary(msvl::BinOp::And, cond, flag_is("return", 0));
  msvl::StmtPtr body = seq_tr(s.body);
  if (c) body = msvl::chop2(body, unit_assign("continue", 0));
  auto w = msvl::make_stmt(msvl::StmtKind::While);
  w->cond = cond;
  w->kids = {body};
  msvl::StmtPtr out = msvl::chop2(once, w);
  if (b) out = msvl::chop2(out, unit_assign("break", 0));
  return out;
}

msvl::StmtPtr Translator::for_tr(const xdc::Stmt& s) {
  bool b = contains_jump_seq(s.body, Jump::Break);
  bool r = contains_jump_seq(s.body, Jump::Return);
  bool c = contains_jump_seq(s.body, Jump::Continue);
  msvl::StmtPtr init = s.for_init ? stmt_tr(s.for_init) : nullptr;
  msvl::ExprPtr cond = s.cond ? ex_tr(s.cond)
                              : msvl::int_lit(1);  // for(;;) loops forever
  if (b) cond = msvl::binary(msvl::BinOp::And, cond, flag_is("break", 0));
  if (r) cond = msvl::binary(msvl::BinOp::And, cond, flag_is("return", 0));
  msvl::StmtPtr body = seq_tr(s.body);
  if (s.for_step) {
    // The step runs unless a break/return escaped the body; continue still
    // falls through to the step (its reset comes after).
    msvl::StmtPtr step = stmt_tr(s.for_step);
    if (r) step = guarded(flag_is("return", 0), step);
    if (b) step = guarded(flag_is("break", 0), step);
    body = msvl::chop2(body, step);
  }
  if (c) body = msvl::chop2(body, unit_assign("continue", 0));
  auto w = msvl::make_stmt(msvl::StmtKind::While);
  w->cond = cond;
  w->kids = {body};
  msvl::StmtPtr out = msvl::chop2(init, w);
  if (b) out = msvl::chop2(out, unit_assign("break", 0));
  return out;
}

msvl::StmtPtr Translator::stmt_tr(const xdc::StmtPtr& s) {
  using xdc::ExprKind;
  if (!s) return msvl::make_stmt(msvl::StmtKind::Empty);
  switch (s->kind) {
    case StmtKind::Null:
      return msvl::make_stmt(msvl::StmtKind::Empty);
    case StmtKind::ExprAssign: {
      auto a = msvl::make_stmt(msvl::StmtKind::UnitAssign);
      a->lhs = vl_tr(s->lhs);
      a->rhs = ex_tr(s->expr);
      return a;
    }
    case StmtKind::PostInc:
    case StmtKind::PostDec: {
      auto a = msvl::make_stmt(msvl::StmtKind::UnitAssign);
      a->lhs = vl_tr(s->lhs);
      a->rhs = msvl::binary(
          s->kind == StmtKind::PostInc ? msvl::BinOp::Add : msvl::BinOp::Sub,
          vl_tr(s->lhs), msvl::int_lit(1));
      return a;
    }
    case StmtKind::Break: return unit_assign("break", 1);
    case StmtKind::Continue: return unit_assign("continue", 1);
    case StmtKind::Return: {
      msvl::StmtPtr r = unit_assign("return", 1);
      if (s->expr) {
        auto rv = msvl::make_stmt(msvl::StmtKind::UnitAssign);
        rv->lhs = msvl::var("RVal");
        rv->rhs = ex_tr(s->expr);
        return msvl::and2(r, rv);
      }
      return r;
    }
    case StmtKind::CallStmt: {
      const xdc::ExprPtr& call = s->expr;
      const std::string callee = call->kids[0]->name;
      std::vector<msvl::ExprPtr> args;
      for (size_t i = 1; i < call->kids.size(); ++i)
        args.push_back(ex_tr(call->kids[i]));
      if (is_extern_func(callee)) {
        auto ec = msvl::make_stmt(msvl::StmtKind::ExtCallStmt);
        ec->name = callee;  // must match the environment model verbatim
        ec->args = std::move(args);
        return msvl::and2(ec, msvl::make_stmt(msvl::StmtKind::Skip));
      }
      // Defined function (directly or through a function pointer): the value
      // of a non-void callee lands in RVal and is discarded.
      bool with_rval = returns_value(callee);
      if (!prog_.find_func(callee)) {
        xdc::TypePtr t = call->kids[0]->type;
        if (t && t->kind == TypeKind::Pointer) t = t->elem;
        with_rval = t && t->kind == TypeKind::Func && t->elem &&
                    t->elem->kind != TypeKind::Void;
      }
      auto ic = msvl::make_stmt(msvl::StmtKind::Call);
      ic->name = map_name(callee);
      ic->args = std::move(args);
      if (with_rval) ic->args.push_back(msvl::var("RVal"));
      return ic;
    }
    case StmtKind::Block:
      return seq_tr(s->body);
    case StmtKind::If: {
      auto m = msvl::make_stmt(msvl::StmtKind::If);
      m->cond = ex_tr(s->cond);
      m->kids = {seq_tr(s->body), seq_tr(s->else_body)};
      return m;
    }
    case StmtKind::While: return while_tr(*s);
    case StmtKind::DoWhile: return do_tr(*s);
    case StmtKind::For: return for_tr(*s);
    case StmtKind::Switch: {
      msvl::StmtPtr out = unit_assign("break", 0);
      out = msvl::chop2(out, unit_assign("switch", 0));
      out = msvl::chop2(out, switch_tr(*s));
      out = msvl::chop2(out, unit_assign("break", 0));
      return out;
    }
    default:
      return msvl::make_stmt(msvl::StmtKind::Empty);  // superset nodes
  }
}

namespace {

// Declaration conjunct for the control-flag variables of one function scope.
msvl::StmtPtr key_var_decls(bool with_rval, const xdc::TypePtr& rval_type) {
  auto mk = [](const std::string& n) {
    auto d = msvl::make_stmt(msvl::StmtKind::Decl);
    d->decl_type = xdc::make_type(xdc::TypeKind::Int);
    d->name = n;
    d->rhs = msvl::int_lit(0);
    return d;
  };
  msvl::StmtPtr s = mk("break");
  s = msvl::and2(s, mk("continue"));
  s = msvl::and2(s, mk("return"));
  s = msvl::and2(s, mk("switch"));
  if (with_rval) {
    auto d = msvl::make_stmt(msvl::StmtKind::Decl);
    d->decl_type = rval_type ? rval_type : xdc::make_type(xdc::TypeKind::Int);
    d->name = "RVal";
    d->rhs = msvl::int_lit(0);
    s = msvl::and2(s, d);
  }
  return msvl::and2(s, msvl::make_stmt(msvl::StmtKind::Skip));
}

}  // namespace

std::optional<msvl::Func> Translator::func_tr(const xdc::FuncDef& f,
                                              DiagnosticSink& sink) {
  (void)sink;
  msvl::Func mf;
  mf.name = map_name(f.name);
  for (const auto& p : f.params)
    mf.params.emplace_back(map_name(p.name), map_type(p.type));
  bool non_void = f.ret && f.ret->kind != TypeKind::Void;
  if (non_void) mf.params.emplace_back("RVal", map_type(f.ret));
  msvl::StmtPtr body = key_var_decls(false, nullptr);
  for (const auto& l : f.locals) body = msvl::chop2(body, dec_tr(l));
  body = msvl::chop2(body, seq_tr(f.body));
  mf.body = body;
  return mf;
}

std::optional<msvl::Program> Translator::prgm_tr(DiagnosticSink& sink) {
  msvl::Program out;
  for (const auto& sd : prog_.structs) {
    msvl::StructDef msd;
    msd.name = map_name(sd.name);
    for (const auto& fl : sd.fields)
      msd.fields.emplace_back(map_name(fl.name), map_type(fl.type));
    out.structs.push_back(std::move(msd));
  }
  const xdc::FuncDef* main_fn = prog_.find_func("main");
  if (!main_fn || main_fn->is_extern) {
    sink.error(prog_.file, Span{}, "no main function");
    return std::nullopt;
  }
  for (const auto& f : prog_.funcs) {
    if (f.is_extern || f.name == "main") continue;
    auto mf = func_tr(f, sink);
    if (!mf) return std::nullopt;
    out.funcs.push_back(std::move(*mf));
  }
  for (const auto& g : prog_.globals) out.globals.push_back(dec_tr(g));
  msvl::StmtPtr body = key_var_decls(true, map_type(main_fn->ret));
  for (const auto& l : main_fn->locals) body = msvl::chop2(body, dec_tr(l));
  body = msvl::chop2(body, seq_tr(main_fn->body));
  out.body = body;
  return out;
}

std::optional<std::string> translate_source(const std::string& c_src,
                                            const std::string& file,
                                            DiagnosticSink& sink,
                                            bool canonical) {
  auto prog = xdc::analyze(c_src, file, sink);
  if (!prog) return std::nullopt;
  Translator tr(*prog);
  auto m = tr.prgm_tr(sink);
  if (!m) return std::nullopt;
  msvl::EmitOptions opt;
  opt.canonical = canonical;
  return msvl::emit(*m, opt);
}

}  // namespace c2m
