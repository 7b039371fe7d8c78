#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include "c2m/msvl_interp.hpp"

// Minimal-model executor. Within a state the program is rewritten to a
// normal form: present assignments are discharged as soon as both sides are
// evaluable (MIN1), variables with no assignment are framed from the previous
// state when reduction stalls (MIN2), and what survives is a set of "next"
// continuations plus interval-length constraints. Transitions append the
// completed state to the interval (TR1) until the residual is empty (TR2).

namespace c2m::msvl {

namespace {

using xdc::TypeKind;

StmtPtr mk(StmtKind k) { return make_stmt(k); }

StmtPtr empty_stmt() { return mk(StmtKind::Empty); }

// A discharged state formula reduces to "true", which is distinct from
// "empty" (the latter pins the interval length). Marked via `armed`.
StmtPtr true_stmt() {
  auto s = mk(StmtKind::Empty);
  s->armed = true;
  return s;
}

bool is_true(const StmtPtr& s) {
  return s && s->kind == StmtKind::Empty && s->armed;
}

StmtPtr resolved_assign(const std::string& path, const TypePtr& t,
                        const Value& v) {
  auto s = mk(StmtKind::PresentAssign);
  s->resolved_path = path;
  s->resolved_type = t;
  auto e = make_expr(ExprKind::IntLit);
  e->resolved = std::make_shared<Value>(v);
  s->rhs = e;
  return s;
}

StmtPtr onext(StmtPtr body) {
  auto s = mk(StmtKind::Next);
  s->armed = true;
  s->kids = {std::move(body)};
  return s;
}

bool is_empty(const StmtPtr& s) {
  return s && s->kind == StmtKind::Empty && !s->armed;
}

// Store-side conversion shared in spirit with the other route: assignment
// adapts arithmetic values to the declared type; strict operators do not.
bool convert_store(const TypePtr& t, const Value& v, Value* out,
                   std::string* err) {
  if (v.is_undef()) { *err = "assignment of undefined value"; return false; }
  if (!t) { *out = v; return true; }
  if (t->is_integer()) {
    int64_t raw;
    if (v.is_int()) {
      raw = v.i;
    } else if (v.is_float()) {
      if (!std::isfinite(v.f) || v.f >= 9.3e18 || v.f <= -9.3e18) {
        *err = "float-to-int conversion out of range";
        return false;
      }
      raw = int64_t(v.f);
    } else {
      *err = "pointer assigned to integer";
      return false;
    }
    *out = Value::int_v(wrap_int(raw, t->int_width(), t->int_signed()),
                        t->int_width(), t->int_signed());
    return true;
  }
  if (t->kind == TypeKind::Float) {
    if (v.is_ptr()) { *err = "pointer assigned to float"; return false; }
    *out = Value::f32(v.is_int() ? double(v.i) : v.f);
    return true;
  }
  if (t->kind == TypeKind::Double) {
    if (v.is_ptr()) { *err = "pointer assigned to double"; return false; }
    *out = Value::f64(v.is_int() ? double(v.i) : v.f);
    return true;
  }
  if (t->kind == TypeKind::Pointer || t->kind == TypeKind::Func) {
    if (v.is_ptr()) { *out = v; return true; }
    if (v.is_int() && v.i == 0) { *out = Value::null_ptr(); return true; }
    *err = "non-pointer assigned to pointer";
    return false;
  }
  *err = "assignment to non-scalar target";
  return false;
}

std::string owner_of(const std::string& path) {
  size_t n = path.find_first_of(".[");
  return n == std::string::npos ? path : path.substr(0, n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction / small helpers
// ---------------------------------------------------------------------------

Interpreter::Interpreter(const Program& prog, ExternEnv externs, int64_t fuel)
    : prog_(prog), externs_(std::move(externs)), fuel_(fuel),
      fuel_left_(fuel) {
  for (const auto& f : prog_.funcs) {
    int32_t b = next_block_++;
    func_blocks_[f.name] = b;
    func_by_block_[b] = f.name;
  }
}

bool Interpreter::fail(const std::string& msg) {
  undetermined_ = false;
  if (err_.empty()) err_ = msg;
  return false;
}

bool Interpreter::stall() {
  undetermined_ = true;
  return false;
}

bool Interpreter::is_defined_func(const std::string& n) const {
  return prog_.find_func(n) != nullptr;
}

int32_t Interpreter::msize_of(const TypePtr& t) const {
  if (!t) return 0;
  switch (t->kind) {
    case TypeKind::Char: case TypeKind::UChar: return 1;
    case TypeKind::Short: case TypeKind::UShort: return 2;
    case TypeKind::Int: case TypeKind::UInt:
    case TypeKind::Long: case TypeKind::ULong:
    case TypeKind::Float: case TypeKind::Pointer: return 4;
    case TypeKind::Double: return 8;
    case TypeKind::Array:
      return t->array_size > 0 ? t->array_size * msize_of(t->elem) : 0;
    case TypeKind::Struct: {
      const StructDef* sd = prog_.find_struct(t->struct_name);
      if (!sd) return 0;
      int32_t n = 0;
      for (const auto& f : sd->fields) n += msize_of(f.second);
      return n;
    }
    default: return 0;
  }
}

bool Interpreter::declare(const std::string& name, const TypePtr& t) {
  auto it = ctx_->cur.frame.find(name);
  if (it != ctx_->cur.frame.end()) return true;  // idempotent
  VarInfo vi;
  vi.block = next_block_++;
  vi.type = t;
  ctx_->cur.frame[name] = vi;
  block_owner_[vi.block] = name;
  return true;
}

bool Interpreter::read_cur(const std::string& path, Value* out) {
  auto it = ctx_->cur.vals.find(path);
  if (it == ctx_->cur.vals.end()) return stall();
  *out = it->second;
  return true;
}

bool Interpreter::write_path(const std::string& path, const Value& v) {
  auto it = ctx_->cur.vals.find(path);
  if (it != ctx_->cur.vals.end()) {
    if (!it->second.same_as(v)) return false;  // contradictory state formula
    return true;
  }
  ctx_->cur.vals[path] = v;
  return true;
}

// ---------------------------------------------------------------------------
// Locations
// ---------------------------------------------------------------------------

// Static type of an expression as far as declarations determine it.
static TypePtr typeof_expr_impl(const Program& prog, const State& frame,
                                const ExprPtr& e) {
  if (!e) return nullptr;
  switch (e->kind) {
    case ExprKind::IntLit: case ExprKind::CharLit:
    case ExprKind::True: case ExprKind::False:
      return xdc::make_type(TypeKind::Int);
    case ExprKind::FloatLit:
      return xdc::make_type(TypeKind::Double);
    case ExprKind::Var: {
      auto it = frame.frame.find(e->name);
      return it == frame.frame.end() ? nullptr : it->second.type;
    }
    case ExprKind::Index: {
      TypePtr b = typeof_expr_impl(prog, frame, e->kids[0]);
      return b && (b->kind == TypeKind::Array || b->kind == TypeKind::Pointer)
                 ? b->elem
                 : nullptr;
    }
    case ExprKind::Deref: {
      TypePtr b = typeof_expr_impl(prog, frame, e->kids[0]);
      return b && b->kind == TypeKind::Pointer ? b->elem : nullptr;
    }
    case ExprKind::Field:
    case ExprKind::Arrow: {
      TypePtr b = typeof_expr_impl(prog, frame, e->kids[0]);
      if (e->kind == ExprKind::Arrow)
        b = b && b->kind == TypeKind::Pointer ? b->elem : nullptr;
      if (!b || b->kind != TypeKind::Struct) return nullptr;
      const StructDef* sd = prog.find_struct(b->struct_name);
      if (!sd) return nullptr;
      for (const auto& f : sd->fields)
        if (f.first == e->name) return f.second;
      return nullptr;
    }
    case ExprKind::AddrOf: {
      TypePtr b = typeof_expr_impl(prog, frame, e->kids[0]);
      return b ? xdc::make_ptr(b) : nullptr;
    }
    case ExprKind::Cast:
      return e->cast_type;
    case ExprKind::Unary:
    case ExprKind::Binary:
      return typeof_expr_impl(prog, frame, e->kids[0]);
    case ExprKind::CondExpr:
      return typeof_expr_impl(prog, frame, e->kids[1]);
    default:
      return nullptr;
  }
}

bool Interpreter::path_for(int32_t b, int32_t off, std::string* path,
                           TypePtr* t) {
  auto ob = block_owner_.find(b);
  if (ob == block_owner_.end()) return fail("dereference of a bad pointer");
  const std::string& name = ob->second;
  auto fi = ctx_->cur.frame.find(name);
  if (fi == ctx_->cur.frame.end())
    return fail("dereference of a pointer to a released variable");
  TypePtr ty = fi->second.type;
  std::string p = name;
  TypePtr want = t ? *t : nullptr;
  while (true) {
    if (off == 0 && want && xdc::type_equal(ty, want)) break;
    if (ty->kind == TypeKind::Array) {
      int32_t es = msize_of(ty->elem);
      if (es <= 0) return fail("bad element size");
      int32_t idx = off / es;
      if (idx < 0 || idx >= ty->array_size)
        return fail("pointer outside the target array");
      p += "[" + std::to_string(idx) + "]";
      off -= idx * es;
      ty = ty->elem;
      continue;
    }
    if (ty->kind == TypeKind::Struct) {
      const StructDef* sd = prog_.find_struct(ty->struct_name);
      if (!sd) return fail("unknown struct " + ty->struct_name);
      int32_t o = 0;
      bool found = false;
      for (const auto& f : sd->fields) {
        int32_t fs = msize_of(f.second);
        if (off >= o && off < o + fs) {
          p += "." + f.first;
          off -= o;
          ty = f.second;
          found = true;
          break;
        }
        o += fs;
      }
      if (!found) return fail("pointer outside the target struct");
      continue;
    }
    if (off != 0) return fail("pointer into the middle of a value");
    break;
  }
  *path = p;
  if (t) *t = ty;
  return true;
}

bool Interpreter::eval_l(const ExprPtr& e, int32_t* b, int32_t* off, TypePtr* t,
                         std::string* path) {
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = ctx_->cur.frame.find(e->name);
      if (it == ctx_->cur.frame.end())
        return fail("unknown variable " + e->name);
      count("L1");
      *b = it->second.block;
      *off = 0;
      *t = it->second.type;
      *path = e->name;
      return true;
    }
    case ExprKind::Index: {
      Value n;
      if (!eval_r(e->kids[1], &n)) return false;
      if (!n.is_int()) return fail("non-integer index");
      TypePtr bt = typeof_expr_impl(prog_, ctx_->cur, e->kids[0]);
      count(e->kids[0]->kind == ExprKind::Index ? "L3" : "L2");
      if (bt && bt->kind == TypeKind::Array) {
        int32_t bb, bo;
        TypePtr btt;
        std::string bp;
        if (!eval_l(e->kids[0], &bb, &bo, &btt, &bp)) return false;
        if (n.i < 0 || n.i >= bt->array_size)
          return fail("index out of range");
        *b = bb;
        *off = bo + int32_t(n.i) * msize_of(bt->elem);
        *t = bt->elem;
        *path = bp + "[" + std::to_string(n.i) + "]";
        return true;
      }
      if (bt && bt->kind == TypeKind::Pointer) {
        Value p;
        if (!eval_r(e->kids[0], &p)) return false;
        if (!p.is_ptr() || p.is_null())
          return fail("indexing a non-pointer or null");
        *t = bt->elem;
        *b = p.block;
        *off = p.off + int32_t(n.i) * msize_of(bt->elem);
        return path_for(*b, *off, path, t);
      }
      return fail("indexing a non-array");
    }
    case ExprKind::Field: {
      int32_t bb, bo;
      TypePtr bt;
      std::string bp;
      if (!eval_l(e->kids[0], &bb, &bo, &bt, &bp)) return false;
      if (!bt || bt->kind != TypeKind::Struct)
        return fail("member access on non-struct");
      count("L4");
      const StructDef* sd = prog_.find_struct(bt->struct_name);
      if (!sd) return fail("unknown struct " + bt->struct_name);
      int32_t o = 0;
      for (const auto& f : sd->fields) {
        if (f.first == e->name) {
          *b = bb;
          *off = bo + o;
          *t = f.second;
          *path = bp + "." + e->name;
          return true;
        }
        o += msize_of(f.second);
      }
      return fail("unknown field " + e->name);
    }
    case ExprKind::Arrow: {
      Value p;
      if (!eval_r(e->kids[0], &p)) return false;
      if (!p.is_ptr() || p.is_null())
        return fail("arrow access through non-pointer or null");
      count("L5");
      TypePtr bt = typeof_expr_impl(prog_, ctx_->cur, e->kids[0]);
      TypePtr st = bt && bt->kind == TypeKind::Pointer ? bt->elem : nullptr;
      if (!st || st->kind != TypeKind::Struct)
        return fail("arrow access on a non-struct pointer");
      std::string sp;
      TypePtr stt = st;
      if (!path_for(p.block, p.off, &sp, &stt)) return false;
      const StructDef* sd = prog_.find_struct(st->struct_name);
      if (!sd) return fail("unknown struct " + st->struct_name);
      int32_t o = 0;
      for (const auto& f : sd->fields) {
        if (f.first == e->name) {
          *b = p.block;
          *off = p.off + o;
          *t = f.second;
          *path = sp + "." + e->name;
          return true;
        }
        o += msize_of(f.second);
      }
      return fail("unknown field " + e->name);
    }
    case ExprKind::Deref: {
      Value p;
      if (!eval_r(e->kids[0], &p)) return false;
      if (!p.is_ptr() || p.is_null())
        return fail("dereference of non-pointer or null");
      count("L6");
      TypePtr bt = typeof_expr_impl(prog_, ctx_->cur, e->kids[0]);
      *t = bt && bt->kind == TypeKind::Pointer ? bt->elem : nullptr;
      *b = p.block;
      *off = p.off;
      return path_for(*b, *off, path, t);
    }
    default:
      return fail("not a left value");
  }
}

// ---------------------------------------------------------------------------
// Right values and boolean conditions
// ---------------------------------------------------------------------------

bool Interpreter::eval_binop(BinOp op, const Value& a, const Value& b,
                             const TypePtr& ta, const TypePtr& tb,
                             Value* out) {
  auto ok_int = [&](int64_t n) {
    *out = Value::int_v(wrap_int(n, a.width, a.is_signed), a.width,
                        a.is_signed);
    return true;
  };
  auto ok_bool = [&](bool t) { *out = Value::int_v(t ? 1 : 0); return true; };
  if (a.is_undef() || b.is_undef()) return fail("undefined operand");

  if (op == BinOp::And || op == BinOp::Or) {
    bool at = a.truthy(), bt = b.truthy();
    return ok_bool(op == BinOp::And ? (at && bt) : (at || bt));
  }

  if ((op == BinOp::Add || op == BinOp::Sub) && (a.is_ptr() || b.is_ptr())) {
    const Value* pv = a.is_ptr() ? &a : &b;
    const Value* nv = a.is_ptr() ? &b : &a;
    const TypePtr& pt = a.is_ptr() ? ta : tb;
    if (!nv->is_int()) return fail("pointer combined with non-integer");
    if (op == BinOp::Sub && !a.is_ptr()) return fail("integer minus pointer");
    TypePtr elem =
        pt && (pt->kind == TypeKind::Pointer || pt->kind == TypeKind::Array)
            ? pt->elem
            : nullptr;
    if (!elem) return fail("pointer arithmetic without element type");
    int64_t d = nv->i * msize_of(elem);
    if (op == BinOp::Sub) d = -d;
    *out = Value::ptr(pv->block, int32_t(pv->off + d));
    return true;
  }

  if ((op == BinOp::Eq || op == BinOp::Ne) && (a.is_ptr() || b.is_ptr())) {
    if (!a.is_ptr() && !(a.is_int() && a.i == 0))
      return fail("pointer compared with integer");
    if (!b.is_ptr() && !(b.is_int() && b.i == 0))
      return fail("pointer compared with integer");
    Value pa = a.is_ptr() ? a : Value::null_ptr();
    Value pb = b.is_ptr() ? b : Value::null_ptr();
    bool eq = pa.block == pb.block && pa.off == pb.off;
    return ok_bool(op == BinOp::Eq ? eq : !eq);
  }
  if ((op == BinOp::Lt || op == BinOp::Gt || op == BinOp::Le ||
       op == BinOp::Ge) &&
      (a.is_ptr() || b.is_ptr())) {
    if (!a.is_ptr() || !b.is_ptr() || a.block != b.block)
      return fail("relational comparison of unrelated pointers");
    int32_t x = a.off, y = b.off;
    switch (op) {
      case BinOp::Lt: return ok_bool(x < y);
      case BinOp::Gt: return ok_bool(x > y);
      case BinOp::Le: return ok_bool(x <= y);
      default: return ok_bool(x >= y);
    }
  }

  if (a.is_int() && b.is_int()) {
    if (a.width != b.width || a.is_signed != b.is_signed)
      return fail("integer operands of different types");
    int64_t x = a.i, y = b.i;
    switch (op) {
      case BinOp::Add: return ok_int(x + y);
      case BinOp::Sub: return ok_int(x - y);
      case BinOp::Mul: return ok_int(x * y);
      case BinOp::Div:
        if (y == 0) return fail("division by zero");
        if (x == INT64_MIN && y == -1) return ok_int(x);
        return ok_int(x / y);
      case BinOp::Mod:
        if (y == 0) return fail("modulo by zero");
        if (x == INT64_MIN && y == -1) return ok_int(0);
        return ok_int(x % y);
      case BinOp::Shl:
      case BinOp::Shr:
        if (y < 0 || y >= a.width) return fail("shift amount out of range");
        if (op == BinOp::Shl) return ok_int(x << y);
        if (!a.is_signed) return ok_int(int64_t(uint64_t(x) >> y));
        return ok_int(x >> y);
      case BinOp::BitAnd: return ok_int(x & y);
      case BinOp::BitOr: return ok_int(x | y);
      case BinOp::BitXor: return ok_int(x ^ y);
      case BinOp::Lt: return ok_bool(x < y);
      case BinOp::Gt: return ok_bool(x > y);
      case BinOp::Le: return ok_bool(x <= y);
      case BinOp::Ge: return ok_bool(x >= y);
      case BinOp::Eq: return ok_bool(x == y);
      case BinOp::Ne: return ok_bool(x != y);
      default: return fail("bad integer operation");
    }
  }
  if (a.is_float() && b.is_float()) {
    if (a.kind != b.kind) return fail("float operands of different precision");
    bool single = a.kind == Value::Kind::F32;
    double x = a.f, y = b.f;
    auto ok_f = [&](double r) {
      *out = single ? Value::f32(r) : Value::f64(r);
      return true;
    };
    switch (op) {
      case BinOp::Add: return ok_f(single ? double(float(x) + float(y)) : x + y);
      case BinOp::Sub: return ok_f(single ? double(float(x) - float(y)) : x - y);
      case BinOp::Mul: return ok_f(single ? double(float(x) * float(y)) : x * y);
      case BinOp::Div:
        if (y == 0.0) return fail("division by zero");
        return ok_f(single ? double(float(x) / float(y)) : x / y);
      case BinOp::Lt: return ok_bool(x < y);
      case BinOp::Gt: return ok_bool(x > y);
      case BinOp::Le: return ok_bool(x <= y);
      case BinOp::Ge: return ok_bool(x >= y);
      case BinOp::Eq: return ok_bool(x == y);
      case BinOp::Ne: return ok_bool(x != y);
      default: return fail("bad floating operation");
    }
  }
  return fail("operands of incompatible types");
}

bool Interpreter::eval_r(const ExprPtr& e, Value* out) {
  if (e->resolved) {
    *out = *e->resolved;
    return true;
  }
  switch (e->kind) {
    case ExprKind::IntLit:
    case ExprKind::CharLit:
      count("R1");
      *out = Value::int_v(wrap_int(e->int_val, 32, true));
      return true;
    case ExprKind::FloatLit:
      count("R1");
      *out = Value::f64(e->float_val);
      return true;
    case ExprKind::True:
      count("R1");
      *out = Value::int_v(1);
      return true;
    case ExprKind::False:
      count("R1");
      *out = Value::int_v(0);
      return true;
    case ExprKind::Var: {
      auto fi = ctx_->cur.frame.find(e->name);
      if (fi == ctx_->cur.frame.end()) {
        auto fb = func_blocks_.find(e->name);
        if (fb != func_blocks_.end()) {
          count("R1");
          *out = Value::ptr(fb->second, 0);  // function designator
          return true;
        }
        return fail("unknown variable " + e->name);
      }
      count("R2");
      if (fi->second.type && fi->second.type->kind == TypeKind::Array) {
        *out = Value::ptr(fi->second.block, 0);  // reference access
        return true;
      }
      return read_cur(e->name, out);
    }
    case ExprKind::Index:
    case ExprKind::Field:
    case ExprKind::Arrow:
    case ExprKind::Deref: {
      int32_t b, off;
      TypePtr t;
      std::string path;
      if (!eval_l(e, &b, &off, &t, &path)) return false;
      if (t && t->kind == TypeKind::Array) {  // reference access
        count("R2");
        *out = Value::ptr(b, off);
        return true;
      }
      count("R2");
      return read_cur(path, out);
    }
    case ExprKind::AddrOf: {
      if (e->kids[0]->kind == ExprKind::Var &&
          !ctx_->cur.frame.count(e->kids[0]->name) &&
          func_blocks_.count(e->kids[0]->name)) {
        count("R3");
        *out = Value::ptr(func_blocks_[e->kids[0]->name], 0);
        return true;
      }
      int32_t b, off;
      TypePtr t;
      std::string path;
      if (!eval_l(e->kids[0], &b, &off, &t, &path)) return false;
      count("R3");
      *out = Value::ptr(b, off);
      return true;
    }
    case ExprKind::Cast: {
      Value v;
      if (!eval_r(e->kids[0], &v)) return false;
      count("R4");
      const TypePtr& to = e->cast_type;
      if (!to) return fail("cast to unknown type");
      if (to->is_integer()) {
        int64_t raw;
        if (v.is_int()) {
          raw = v.i;
        } else if (v.is_float()) {
          if (!std::isfinite(v.f) || v.f >= 9.3e18 || v.f <= -9.3e18)
            return fail("float-to-int conversion out of range");
          raw = int64_t(v.f);
        } else {
          return fail("cast of pointer to integer");
        }
        *out = Value::int_v(wrap_int(raw, to->int_width(), to->int_signed()),
                            to->int_width(), to->int_signed());
        return true;
      }
      if (to->kind == TypeKind::Float || to->kind == TypeKind::Double) {
        if (v.is_ptr()) return fail("cast of pointer to float");
        double x = v.is_int() ? double(v.i) : v.f;
        *out = to->kind == TypeKind::Float ? Value::f32(x) : Value::f64(x);
        return true;
      }
      if (to->kind == TypeKind::Pointer) {
        if (v.is_ptr()) { *out = v; return true; }
        if (v.is_int() && v.i == 0) { *out = Value::null_ptr(); return true; }
        return fail("cast of non-pointer to pointer");
      }
      return fail("unsupported cast");
    }
    case ExprKind::Unary: {
      Value v;
      if (!eval_r(e->kids[0], &v)) return false;
      count("R5");
      switch (e->un_op) {
        case UnOp::Neg:
          if (v.is_int()) {
            *out = Value::int_v(wrap_int(-v.i, v.width, v.is_signed), v.width,
                                v.is_signed);
            return true;
          }
          if (v.is_float()) { *out = v; out->f = -out->f; return true; }
          return fail("negation of a pointer");
        case UnOp::Not:
          *out = Value::int_v(v.truthy() ? 0 : 1);
          return true;
        case UnOp::BitNot:
          if (!v.is_int()) return fail("bitwise not of non-integer");
          *out = Value::int_v(wrap_int(~v.i, v.width, v.is_signed), v.width,
                              v.is_signed);
          return true;
      }
      return fail("bad unary operator");
    }
    case ExprKind::Binary: {
      if (e->bin_op == BinOp::And || e->bin_op == BinOp::Or) {
        bool t;
        if (!eval_b(e, &t)) return false;
        *out = Value::int_v(t ? 1 : 0);
        return true;
      }
      Value a, b;
      if (!eval_r(e->kids[0], &a)) return false;
      if (!eval_r(e->kids[1], &b)) return false;
      count("R6");
      return eval_binop(e->bin_op, a, b,
                        typeof_expr_impl(prog_, ctx_->cur, e->kids[0]),
                        typeof_expr_impl(prog_, ctx_->cur, e->kids[1]), out);
    }
    case ExprKind::CondExpr: {
      bool c;
      if (!eval_b(e->kids[0], &c)) return false;
      count(c ? "R7" : "R8");
      return eval_r(c ? e->kids[1] : e->kids[2], out);
    }
    case ExprKind::Prev: {
      if (!ctx_->has_prev) return fail("prev at the first state");
      count("R9");
      // Evaluate a location path and read it at the previous state.
      int32_t b, off;
      TypePtr t;
      std::string path;
      if (!eval_l(e->kids[0], &b, &off, &t, &path)) return false;
      auto it = ctx_->prev.vals.find(path);
      if (it == ctx_->prev.vals.end())
        return fail("undefined previous value of " + path);
      *out = it->second;
      return true;
    }
    case ExprKind::ExtCall: {
      const Func* f = resolve_callee(e->name);
      if (f) {
        // Defined function in value position: its body runs over a side
        // interval starting from the current state; the value is the final
        // RVal. The side interval and its effects are not kept.
        std::vector<ExprPtr> args(e->kids.begin(), e->kids.end());
        std::string rval_name;
        StmtPtr prog = expand_call(*f, args, false, &rval_name);
        if (!prog) return false;
        if (rval_name.empty())
          return fail("value call of a function without RVal");
        count("R10");
        Value rv;
        State ignored;
        if (!side_run(prog, &rv, &ignored, rval_name)) return false;
        *out = rv;
        return true;
      }
      // External function: the model supplies the value.
      std::vector<Value> args;
      for (const auto& a : e->kids) {
        Value v;
        if (!eval_r(a, &v)) return false;
        args.push_back(v);
      }
      count("R11");
      std::string err;
      if (!externs_.call(e->name, args, out, &err)) return fail(err);
      return true;
    }
    default:
      return fail("unsupported expression");
  }
}

bool Interpreter::eval_b(const ExprPtr& e, bool* out) {
  switch (e->kind) {
    case ExprKind::True: count("B1"); *out = true; return true;
    case ExprKind::False: count("B2"); *out = false; return true;
    case ExprKind::Unary:
      if (e->un_op == UnOp::Not) {
        bool t;
        if (!eval_b(e->kids[0], &t)) return false;
        count("B4");
        *out = !t;
        return true;
      }
      break;
    case ExprKind::Binary:
      if (e->bin_op == BinOp::And || e->bin_op == BinOp::Or) {
        bool a, b;  // total evaluation of both sides
        if (!eval_b(e->kids[0], &a)) return false;
        if (!eval_b(e->kids[1], &b)) return false;
        count(e->bin_op == BinOp::And ? "B5" : "B6");
        *out = e->bin_op == BinOp::And ? (a && b) : (a || b);
        return true;
      }
      if (e->bin_op == BinOp::Eq || e->bin_op == BinOp::Ne ||
          e->bin_op == BinOp::Lt || e->bin_op == BinOp::Gt ||
          e->bin_op == BinOp::Le || e->bin_op == BinOp::Ge) {
        Value a, b, r;
        if (!eval_r(e->kids[0], &a)) return false;
        if (!eval_r(e->kids[1], &b)) return false;
        count("B3");
        if (!eval_binop(e->bin_op, a, b,
                        typeof_expr_impl(prog_, ctx_->cur, e->kids[0]),
                        typeof_expr_impl(prog_, ctx_->cur, e->kids[1]), &r))
          return false;
        *out = r.truthy();
        return true;
      }
      break;
    default:
      break;
  }
  Value v;  // a bare term in boolean position: truth is "nonzero"
  if (!eval_r(e, &v)) return false;
  if (v.is_undef()) return fail("undefined condition");
  *out = v.truthy();
  return true;
}

// ---------------------------------------------------------------------------
// Call expansion and renaming
// ---------------------------------------------------------------------------

namespace {

void collect_decl_names(const StmtPtr& s, std::vector<std::string>* out) {
  if (!s) return;
  if (s->kind == StmtKind::Decl) out->push_back(s->name);
  for (const auto& k : s->kids) collect_decl_names(k, out);
}

ExprPtr rename_expr(const ExprPtr& e,
                    const std::map<std::string, std::string>& m) {
  if (!e) return nullptr;
  auto c = std::make_shared<Expr>(*e);
  if ((e->kind == ExprKind::Var || e->kind == ExprKind::ExtCall)) {
    auto it = m.find(e->name);
    if (it != m.end()) c->name = it->second;
  }
  c->kids.clear();
  for (const auto& k : e->kids) c->kids.push_back(rename_expr(k, m));
  return c;
}

StmtPtr rename_stmt(const StmtPtr& s,
                    const std::map<std::string, std::string>& m) {
  if (!s) return nullptr;
  auto c = std::make_shared<Stmt>(*s);
  if (s->kind == StmtKind::Decl || s->kind == StmtKind::Call ||
      s->kind == StmtKind::ExtCallStmt) {
    auto it = m.find(s->name);
    if (it != m.end()) c->name = it->second;
  }
  c->lhs = rename_expr(s->lhs, m);
  c->rhs = rename_expr(s->rhs, m);
  c->cond = rename_expr(s->cond, m);
  c->init_list.clear();
  for (const auto& e : s->init_list) c->init_list.push_back(rename_expr(e, m));
  c->args.clear();
  for (const auto& e : s->args) c->args.push_back(rename_expr(e, m));
  c->kids.clear();
  for (const auto& k : s->kids) c->kids.push_back(rename_stmt(k, m));
  return c;
}

}  // namespace

const Func* Interpreter::resolve_callee(const std::string& name) {
  const Func* f = prog_.find_func(name);
  if (f) return f;
  // A variable holding a pointer to a defined function.
  if (ctx_ && ctx_->cur.frame.count(name)) {
    Value v;
    if (read_cur(name, &v) && v.is_ptr()) {
      auto it = func_by_block_.find(v.block);
      if (it != func_by_block_.end()) return prog_.find_func(it->second);
    }
    err_.clear();
    undetermined_ = false;
  }
  return nullptr;
}

StmtPtr Interpreter::expand_call(const Func& f,
                                 const std::vector<ExprPtr>& args,
                                 bool with_epilogue, std::string* rval_name) {
  if (args.size() != f.params.size()) {
    fail("wrong argument count for " + f.name);
    return nullptr;
  }
  int k = ++activation_;
  std::map<std::string, std::string> m;
  std::vector<std::string> locals;
  collect_decl_names(f.body, &locals);
  std::vector<std::string> renamed;
  auto add = [&](const std::string& n) {
    if (m.count(n)) return;
    std::string nn = n + "#" + std::to_string(k);
    m[n] = nn;
    renamed.push_back(nn);
  };
  for (const auto& p : f.params) add(p.first);
  for (const auto& n : locals) add(n);

  if (rval_name) {
    auto it = m.find("RVal");
    *rval_name = it == m.end() ? std::string() : it->second;
  }

  // Parameter bindings: declarations carrying the (caller-scope) argument
  // expressions as present initializers at the first state of the body.
  StmtPtr binds;
  for (size_t i = 0; i < f.params.size(); ++i) {
    auto d = mk(StmtKind::Decl);
    d->decl_type = f.params[i].second;
    d->name = m[f.params[i].first];
    d->rhs = args[i];
    binds = and2(binds, d);
  }
  StmtPtr body = rename_stmt(f.body, m);
  StmtPtr head = binds ? and2(binds, body) : body;
  if (!with_epilogue) return head;

  auto mfree = mk(StmtKind::ExtCallStmt);
  mfree->name = "mfree";
  for (const auto& n : renamed) {
    auto v = make_expr(ExprKind::Var);
    v->name = n;
    mfree->args.push_back(v);
  }
  return chop2(head, onext(and2(mfree, empty_stmt())));
}

// ---------------------------------------------------------------------------
// Rewriting within a state
// ---------------------------------------------------------------------------

StmtPtr Interpreter::rewrite(const StmtPtr& s, NF* nf, bool* progressed) {
  switch (s->kind) {
    case StmtKind::Empty:
    case StmtKind::More:
      return s;
    case StmtKind::Skip:
      count("SKIP");
      *progressed = true;
      return onext(empty_stmt());
    case StmtKind::Next: {
      if (s->armed) return s;
      count("NEXT");
      *progressed = true;
      return onext(s->kids[0]);
    }
    case StmtKind::Alw: {
      if (s->armed) return s;
      auto armed = std::make_shared<Stmt>(*s);
      armed->armed = true;
      StmtPtr body = rewrite(s->kids[0], nf, progressed);
      if (!body) return nullptr;
      *progressed = true;
      return and2(body, armed);
    }
    case StmtKind::Decl: {
      declare(s->name, s->decl_type);
      if (s->rhs) {
        Value v;
        if (!eval_r(s->rhs, &v)) {
          if (undetermined_) { undetermined_ = false; return s; }
          return nullptr;
        }
        Value cv;
        std::string err;
        if (!convert_store(s->decl_type, v, &cv, &err)) {
          fail(err);
          return nullptr;
        }
        count("MIN1");
        if (!write_path(s->name, cv)) { nf->is_false = true; return nullptr; }
        *progressed = true;
        return true_stmt();
      }
      if (!s->init_list.empty()) {
        // Aggregate initializer: fill scalar paths in layout order.
        std::vector<std::pair<std::string, TypePtr>> slots;
        std::function<void(const TypePtr&, const std::string&)> flat =
            [&](const TypePtr& t, const std::string& p) {
              if (t->kind == TypeKind::Array) {
                for (int i = 0; i < t->array_size; ++i)
                  flat(t->elem, p + "[" + std::to_string(i) + "]");
              } else if (t->kind == TypeKind::Struct) {
                const StructDef* sd = prog_.find_struct(t->struct_name);
                if (!sd) return;
                for (const auto& fl : sd->fields)
                  flat(fl.second, p + "." + fl.first);
              } else {
                slots.emplace_back(p, t);
              }
            };
        flat(s->decl_type, s->name);
        if (s->init_list.size() > slots.size()) {
          fail("too many initializers for " + s->name);
          return nullptr;
        }
        for (size_t i = 0; i < s->init_list.size(); ++i) {
          Value v;
          if (!eval_r(s->init_list[i], &v)) {
            if (undetermined_) { undetermined_ = false; return s; }
            return nullptr;
          }
          Value cv;
          std::string err;
          if (!convert_store(slots[i].second, v, &cv, &err)) {
            fail(err);
            return nullptr;
          }
          count("MIN1");
          if (!write_path(slots[i].first, cv)) {
            nf->is_false = true;
            return nullptr;
          }
        }
        *progressed = true;
        return true_stmt();
      }
      *progressed = true;
      return true_stmt();
    }
    case StmtKind::PresentAssign: {
      std::string path = s->resolved_path;
      TypePtr t = s->resolved_type;
      if (path.empty()) {
        int32_t b, off;
        if (!eval_l(s->lhs, &b, &off, &t, &path)) {
          if (undetermined_) { undetermined_ = false; return s; }
          return nullptr;
        }
      }
      Value v;
      if (!eval_r(s->rhs, &v)) {
        if (undetermined_) { undetermined_ = false; return s; }
        return nullptr;
      }
      Value cv;
      std::string err;
      if (!convert_store(t, v, &cv, &err)) { fail(err); return nullptr; }
      count("MIN1");
      if (!write_path(path, cv)) { nf->is_false = true; return nullptr; }
      *progressed = true;
      return true_stmt();
    }
    case StmtKind::UnitAssign: {
      int32_t b, off;
      TypePtr t;
      std::string path;
      if (!eval_l(s->lhs, &b, &off, &t, &path)) {
        if (undetermined_) { undetermined_ = false; return s; }
        return nullptr;
      }
      Value v;
      if (!eval_r(s->rhs, &v)) {
        if (undetermined_) { undetermined_ = false; return s; }
        return nullptr;
      }
      count("UASS");
      *progressed = true;
      return onext(and2(resolved_assign(path, t, v), empty_stmt()));
    }
    case StmtKind::And: {
      count("AND");
      std::vector<StmtPtr> parts;
      bool saw_empty = false;
      bool dropped_state = false;  // discharged state conjuncts (CHOP1 marker)
      for (const auto& k : s->kids) {
        StmtPtr r = rewrite(k, nf, progressed);
        if (!r) return nullptr;
        if (is_true(r)) { dropped_state = true; continue; }
        if (is_empty(r)) { saw_empty = true; continue; }
        if (r->state_residue) dropped_state = true;
        if (r->kind == StmtKind::And) {
          for (auto& kk : r->kids) {
            if (is_true(kk)) { dropped_state = true; continue; }
            if (is_empty(kk)) saw_empty = true;
            else parts.push_back(kk);
          }
        } else {
          parts.push_back(r);
        }
      }
      if (parts.empty()) return saw_empty ? empty_stmt() : true_stmt();
      StmtPtr acc;
      for (auto& p : parts) acc = and2(acc, p);
      if (saw_empty) acc = and2(acc, empty_stmt());
      if (dropped_state) acc->state_residue = true;
      return acc;
    }
    case StmtKind::Chop: {
      StmtPtr head = rewrite(s->kids[0], nf, progressed);
      if (!head) return nullptr;
      std::vector<StmtPtr> rest(s->kids.begin() + 1, s->kids.end());
      auto make_rest = [&]() -> StmtPtr {
        if (rest.empty()) return empty_stmt();
        if (rest.size() == 1) return rest[0];
        auto c = mk(StmtKind::Chop);
        c->kids = rest;
        return c;
      };
      // Decompose the reduced head into state conjuncts, next-parts and
      // re-armed always-bodies.
      std::vector<StmtPtr> state_parts, next_parts, alw_parts;
      bool head_empty = false, head_more = false;
      std::vector<StmtPtr> conj =
          head->kind == StmtKind::And ? head->kids
                                      : std::vector<StmtPtr>{head};
      bool head_pending = false;
      bool head_state = head->state_residue;
      head->state_residue = false;  // consumed by this decomposition
      for (const auto& c : conj) {
        if (is_true(c)) { head_state = true; continue; }
        if (is_empty(c)) head_empty = true;
        else if (c->kind == StmtKind::More) head_more = true;
        else if (c->kind == StmtKind::Next && c->armed)
          next_parts.push_back(c->kids[0]);
        else if (c->kind == StmtKind::Alw && c->armed)
          alw_parts.push_back(c->kids[0]);
        else {
          state_parts.push_back(c);
          head_pending = true;
        }
      }
      if (head_pending) {
        // Head not decided yet (or consists of stalled conjuncts): keep.
        auto c = mk(StmtKind::Chop);
        c->kids.push_back(head);
        for (auto& r : rest) c->kids.push_back(r);
        return c;
      }
      if (next_parts.empty() && !head_more) {
        // Head terminates at this state: empty ; ms2 == ms2. An always over
        // an ended head is absorbed (its body already held here).
        count("CHOP3");
        *progressed = true;
        for (size_t i = 0; i < alw_parts.size(); ++i) count("ALW1");
        StmtPtr cont = rewrite(make_rest(), nf, progressed);
        if (!cont) return nullptr;
        return cont;
      }
      if (head_empty) { nf->is_false = true; return nullptr; }
      // A head equivalent to "alw more" swallows the continuation.
      if (next_parts.empty() && alw_parts.size() == 1 &&
          alw_parts[0]->kind == StmtKind::More && head_more) {
        count("CHOP4");
        *progressed = true;
        return head;
      }
      count(head_state ? "CHOP1" : "CHOP2");
      *progressed = true;
      StmtPtr inner;
      for (auto& n : next_parts) inner = and2(inner, n);
      for (auto& a : alw_parts) {
        auto alw = mk(StmtKind::Alw);
        alw->kids = {a};
        inner = and2(inner, alw);
        count("ALW2");
      }
      StmtPtr cont;
      if (inner) {
        auto c = mk(StmtKind::Chop);
        c->kids.push_back(inner);
        for (auto& r : rest) c->kids.push_back(r);
        cont = c->kids.size() == 1 ? inner : c;
      } else {
        cont = make_rest();  // "more" alone: the tail starts next state
      }
      return onext(cont);
    }
    case StmtKind::If: {
      bool c;
      if (!eval_b(s->cond, &c)) {
        if (undetermined_) { undetermined_ = false; return s; }
        return nullptr;
      }
      count("IF");
      *progressed = true;
      return rewrite(c ? s->kids[0] : s->kids[1], nf, progressed);
    }
    case StmtKind::While: {
      bool c;
      if (!eval_b(s->cond, &c)) {
        if (undetermined_) { undetermined_ = false; return s; }
        return nullptr;
      }
      count("WHL");
      *progressed = true;
      if (!c) return empty_stmt();
      StmtPtr body_more = and2(s->kids[0], mk(StmtKind::More));
      return rewrite(chop2(body_more, std::make_shared<Stmt>(*s)), nf,
                     progressed);
    }
    case StmtKind::Call: {
      const Func* f = resolve_callee(s->name);
      if (!f) {
        if (undetermined_) { undetermined_ = false; return s; }
        return fail("call of unknown function " + s->name), nullptr;
      }
      count("FUN");
      *progressed = true;
      StmtPtr exp = expand_call(*f, s->args, true, nullptr);
      if (!exp) return nullptr;
      return rewrite(exp, nf, progressed);
    }
    case StmtKind::ExtCallStmt: {
      if (s->name == "mfree") {
        ExtAction a;
        a.k = ExtAction::K::Mfree;
        for (const auto& e : s->args) a.free_names.push_back(e->name);
        count("EXT3");
        nf->exts.push_back(std::move(a));
        *progressed = true;
        return true_stmt();
      }
      const Func* f = resolve_callee(s->name);
      if (f) {
        // External-style call of a defined function: run it over a side
        // interval and splice the final state in at the transition.
        std::string rv;
        StmtPtr prog = expand_call(*f, s->args, true, &rv);
        if (!prog) return nullptr;
        Value ignored;
        ExtAction a;
        a.k = ExtAction::K::Splice;
        if (!side_run(prog, &ignored, &a.splice, rv)) {
          if (undetermined_) { undetermined_ = false; return s; }
          return nullptr;
        }
        count("EXT1");
        nf->exts.push_back(std::move(a));
        *progressed = true;
        return true_stmt();
      }
      ExtAction a;
      a.k = ExtAction::K::Extern;
      a.callee = s->name;
      for (const auto& e : s->args) {
        Value v;
        if (!eval_r(e, &v)) {
          if (undetermined_) { undetermined_ = false; return s; }
          return nullptr;
        }
        a.args.push_back(v);
      }
      count("EXT2");
      nf->exts.push_back(std::move(a));
      *progressed = true;
      return true_stmt();
    }
    default:
      fail("unsupported statement");
      return nullptr;
  }
}

// ---------------------------------------------------------------------------
// State loop
// ---------------------------------------------------------------------------

std::set<std::string> Interpreter::assign_targets(const StmtPtr& s) {
  std::set<std::string> out;
  std::function<void(const StmtPtr&)> walk = [&](const StmtPtr& p) {
    if (!p) return;
    switch (p->kind) {
      case StmtKind::Decl:
        out.insert(p->name);
        return;
      case StmtKind::PresentAssign: {
        if (!p->resolved_path.empty()) {
          out.insert(p->resolved_path);
          return;
        }
        // Target not resolvable yet: block its variable name when obvious,
        // otherwise everything reachable through the expression.
        if (p->lhs && p->lhs->kind == ExprKind::Var) out.insert(p->lhs->name);
        else out.insert("*");
        return;
      }
      case StmtKind::Next:
        if (p->armed) return;  // next-state content
        walk(p->kids.empty() ? nullptr : p->kids[0]);
        return;
      default:
        for (const auto& k : p->kids) walk(k);
        return;
    }
  };
  walk(s);
  return out;
}

bool Interpreter::frame_candidates(const std::set<std::string>& blocked,
                                   bool count_min2) {
  if (!ctx_->has_prev) return false;
  bool any = false;
  bool block_all = blocked.count("*") > 0;
  for (const auto& [path, v] : ctx_->prev.vals) {
    if (ctx_->cur.vals.count(path)) continue;
    std::string name = owner_of(path);
    if (!ctx_->cur.frame.count(name)) continue;  // released variable
    if (block_all || blocked.count(path) || blocked.count(name)) continue;
    ctx_->cur.vals[path] = v;
    if (count_min2) count("MIN2");
    any = true;
  }
  return any;
}

namespace {

// Does the residual still contain conjuncts that must be discharged within
// the current state?
bool has_pending(const StmtPtr& s) {
  if (!s) return false;
  switch (s->kind) {
    case StmtKind::Empty:
    case StmtKind::More:
      return false;
    case StmtKind::Next:
    case StmtKind::Alw:
      return !s->armed;
    case StmtKind::And: {
      for (const auto& k : s->kids)
        if (has_pending(k)) return true;
      return false;
    }
    default:
      return true;
  }
}

}  // namespace

bool Interpreter::run_in_ctx(StmtPtr prog, Ctx& ctx, RunResult* rr) {
  Ctx* saved = ctx_;
  ctx_ = &ctx;
  StmtPtr p = std::move(prog);
  bool ok = false;
  while (true) {
    if (--fuel_left_ < 0) {
      rr->k = RunResult::K::Timeout;
      rr->error = "fuel exhausted";
      break;
    }
    NF nf;
    bool stuck_framed = false;
    bool failed = false;
    while (true) {
      bool progressed = false;
      StmtPtr q = rewrite(p, &nf, &progressed);
      if (!q) {
        if (nf.is_false) {
          rr->k = RunResult::K::Infeasible;
          rr->error = "contradictory state formula";
        } else {
          rr->k = RunResult::K::RuntimeError;
          rr->error = err_.empty() ? "reduction failed" : err_;
        }
        failed = true;
        break;
      }
      p = q;
      if (!has_pending(p)) break;
      if (progressed) continue;
      if (frame_candidates(assign_targets(p), true)) continue;
      (void)stuck_framed;
      rr->k = RunResult::K::RuntimeError;
      rr->error = "undetermined value at the current state";
      failed = true;
      break;
    }
    if (failed) break;
    // Minimal-model framing of everything still carried from the previous
    // state (MIN2), now that no assignment can target it.
    frame_candidates({}, true);

    // Classify the residual.
    bool has_empty = false;
    nf.more = false;
    nf.nexts.clear();
    nf.alws.clear();
    std::vector<StmtPtr> conj =
        p->kind == StmtKind::And ? p->kids : std::vector<StmtPtr>{p};
    for (const auto& c : conj) {
      if (is_empty(c)) has_empty = true;
      else if (c->kind == StmtKind::More) nf.more = true;
      else if (c->kind == StmtKind::Next && c->armed)
        nf.nexts.push_back(c->kids[0]);
      else if (c->kind == StmtKind::Alw && c->armed)
        nf.alws.push_back(c->kids[0]);
    }

    bool final_state = nf.nexts.empty() && !nf.more;
    if (!final_state && has_empty) {
      rr->k = RunResult::K::Infeasible;
      rr->error = "empty conjoined with a next-state requirement";
      break;
    }

    // Apply transition effects in discovery order.
    const State* splice = nullptr;
    std::set<std::string> dead;
    for (auto& a : nf.exts) {
      switch (a.k) {
        case ExtAction::K::Extern: {
          Value res;
          std::string err;
          if (!externs_.call(a.callee, a.args, &res, &err)) {
            rr->k = RunResult::K::RuntimeError;
            rr->error = err;
            failed = true;
          }
          break;
        }
        case ExtAction::K::Mfree:
          for (const auto& n : a.free_names) dead.insert(n);
          break;
        case ExtAction::K::Splice:
          splice = &a.splice;
          break;
      }
      if (failed) break;
    }
    if (failed) break;

    if (final_state) {
      for (size_t i = 0; i < nf.alws.size(); ++i) count("ALW1");
      for (const auto& n : dead) {
        ctx.cur.frame.erase(n);
        std::erase_if(ctx.cur.vals, [&](const auto& kv) {
          return owner_of(kv.first) == n;
        });
      }
      count("TR2");
      ctx.sigma.push_back(ctx.cur);
      rr->k = RunResult::K::Terminated;
      ok = true;
      break;
    }

    count("TR1");
    ctx.sigma.push_back(ctx.cur);
    State base = splice ? *splice : ctx.cur;
    for (const auto& n : dead) {
      base.frame.erase(n);
      std::erase_if(base.vals,
                    [&](const auto& kv) { return owner_of(kv.first) == n; });
    }
    StmtPtr next_prog;
    for (auto& n : nf.nexts) next_prog = and2(next_prog, n);
    for (auto& a : nf.alws) {
      auto alw = mk(StmtKind::Alw);
      alw->kids = {a};
      next_prog = and2(next_prog, alw);
      count("ALW2");
    }
    if (!next_prog) next_prog = empty_stmt();  // bare "more": minimal model
    ctx.prev = base;
    ctx.has_prev = true;
    ctx.cur = State{};
    ctx.cur.frame = base.frame;
    p = next_prog;
  }
  ctx_ = saved;
  return ok;
}

bool Interpreter::side_run(const StmtPtr& prog, Value* rval_out,
                           State* final_state, const std::string& rval_name) {
  if (ctx_->depth > 200) return fail("call depth exceeded");
  Ctx sub;
  sub.depth = ctx_->depth + 1;
  sub.cur.frame = ctx_->cur.frame;
  // s'_0 starts from the current state as it stands after framing: overlay
  // current values on what the previous state still carries.
  if (ctx_->has_prev) {
    for (const auto& [path, v] : ctx_->prev.vals)
      if (ctx_->cur.frame.count(owner_of(path))) sub.cur.vals[path] = v;
  }
  for (const auto& [path, v] : ctx_->cur.vals) sub.cur.vals[path] = v;

  RunResult sub_rr;
  if (!run_in_ctx(prog, sub, &sub_rr)) {
    return fail(sub_rr.error.empty() ? "side interval failed" : sub_rr.error);
  }
  const State& fin = sub.sigma.back();
  if (final_state) *final_state = fin;
  if (rval_out) {
    auto it = fin.vals.find(rval_name);
    *rval_out = it == fin.vals.end() ? Value::undef() : it->second;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

RunResult Interpreter::run() {
  RunResult rr;
  StmtPtr full;
  for (const auto& g : prog_.globals) full = chop2(full, g);
  full = chop2(full, prog_.body);
  if (!full) full = empty_stmt();

  Ctx ctx;
  bool ok = run_in_ctx(full, ctx, &rr);
  rr.trace = externs_.trace();
  rr.rule_counts = rules_;
  rr.func_blocks = func_blocks_;
  if (!ok) {
    if (rr.k == RunResult::K::Terminated) {
      rr.k = RunResult::K::RuntimeError;
      rr.error = err_.empty() ? "execution failed" : err_;
    }
    if (fuel_left_ < 0 && rr.k == RunResult::K::RuntimeError &&
        rr.error.find("fuel") != std::string::npos)
      rr.k = RunResult::K::Timeout;
    rr.interval = ctx.sigma;
    return rr;
  }
  rr.interval = ctx.sigma;
  const State& fin = ctx.sigma.back();
  auto rv = fin.vals.find("RVal");
  if (rv != fin.vals.end() && rv->second.is_int()) rr.exit_code = rv->second.i;

  for (const auto& [name, vi] : fin.frame) {
    rr.var_blocks[name] = vi.block;
    std::function<void(const TypePtr&, const std::string&, int32_t)> walk =
        [&](const TypePtr& t, const std::string& path, int32_t off) {
          if (t && t->kind == TypeKind::Array) {
            int32_t es = msize_of(t->elem);
            for (int i = 0; i < t->array_size; ++i)
              walk(t->elem, path + "[" + std::to_string(i) + "]",
                   off + i * es);
            return;
          }
          if (t && t->kind == TypeKind::Struct) {
            const StructDef* sd = prog_.find_struct(t->struct_name);
            if (!sd) return;
            int32_t o = off;
            for (const auto& f : sd->fields) {
              walk(f.second, path + "." + f.first, o);
              o += msize_of(f.second);
            }
            return;
          }
          auto it = fin.vals.find(path);
          rr.snapshot.push_back({path,
                                 it == fin.vals.end() ? Value::undef()
                                                      : it->second,
                                 vi.block, off});
        };
    walk(vi.type, name, 0);
  }
  return rr;
}

void Interpreter::bind_var(const std::string& name, const TypePtr& t,
                           const Value& v) {
  Ctx* saved = ctx_;
  ctx_ = &test_ctx_;
  declare(name, t);
  if (!v.is_undef()) {
    Value cv;
    std::string err;
    if (convert_store(t, v, &cv, &err)) write_path(name, cv);
  }
  ctx_ = saved;
}

bool Interpreter::eval_right(const ExprPtr& e, Value* out, std::string* err) {
  Ctx* saved = ctx_;
  ctx_ = &test_ctx_;
  err_.clear();
  bool ok = eval_r(e, out);
  if (!ok && err) *err = err_.empty() ? "evaluation failed" : err_;
  err_.clear();
  undetermined_ = false;
  ctx_ = saved;
  return ok;
}

bool Interpreter::eval_bool(const ExprPtr& e, bool* out, std::string* err) {
  Ctx* saved = ctx_;
  ctx_ = &test_ctx_;
  err_.clear();
  bool ok = eval_b(e, out);
  if (!ok && err) *err = err_.empty() ? "evaluation failed" : err_;
  err_.clear();
  undetermined_ = false;
  ctx_ = saved;
  return ok;
}

RunResult run_program(const Program& prog, ExternEnv externs, int64_t fuel) {
  Interpreter in(prog, std::move(externs), fuel);
  return in.run();
}

}  // namespace c2m::msvl
