#include <bit>
#include <functional>
#include <cmath>
#include <cstring>

#include "c2m/xdc_interp.hpp"

// Big-step interpreter over block-based memory. Every statement-level rule
// application consumes one unit of fuel; expression evaluation is free.

namespace c2m::xdc {

// ---------------------------------------------------------------------------
// Memory
// ---------------------------------------------------------------------------

int32_t MemState::alloc(int32_t size) {
  int32_t b = next_block++;
  MemBlock blk;
  blk.lo = 0;
  blk.hi = size;
  blk.cells.resize(size);
  blocks[b] = std::move(blk);
  return b;
}

void MemState::free_block(int32_t b) {
  auto it = blocks.find(b);
  if (it != blocks.end()) it->second.freed = true;
}

bool MemState::valid(int32_t b, int32_t off, int32_t size) const {
  auto it = blocks.find(b);
  if (it == blocks.end() || it->second.freed) return false;
  return off >= it->second.lo && off + size <= it->second.hi;
}

bool MemState::same_contents(const MemState& o) const {
  // Every block of `o` must be unchanged in `this`; blocks created since
  // (absent from `o`) must have been released again.
  for (const auto& [b, blk] : blocks) {
    auto it = o.blocks.find(b);
    if (it == o.blocks.end()) {
      if (!blk.freed) return false;
      continue;
    }
    const MemBlock& ob = it->second;
    if (blk.freed != ob.freed || blk.hi != ob.hi) return false;
    for (size_t i = 0; i < blk.cells.size(); ++i) {
      const MemCell& a = blk.cells[i];
      const MemCell& c = ob.cells[i];
      if (a.k != c.k || a.byte != c.byte || a.pb != c.pb || a.poff != c.poff ||
          a.frag != c.frag)
        return false;
    }
  }
  for (const auto& [b, blk] : o.blocks)
    if (!blocks.count(b)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

int32_t size_of(const TypePtr& t, const Program& p) {
  if (!t) return 0;
  switch (t->kind) {
    case TypeKind::Char:
    case TypeKind::UChar: return 1;
    case TypeKind::Short:
    case TypeKind::UShort: return 2;
    case TypeKind::Int:
    case TypeKind::UInt:
    case TypeKind::Long:
    case TypeKind::ULong:
    case TypeKind::Float:
    case TypeKind::Pointer: return 4;
    case TypeKind::Double: return 8;
    case TypeKind::Array:
      return t->array_size > 0 ? t->array_size * size_of(t->elem, p) : 0;
    case TypeKind::Struct: {
      const StructDef* sd = p.find_struct(t->struct_name);
      if (!sd) return 0;
      int32_t n = 0;
      for (const auto& f : sd->fields) n += size_of(f.type, p);
      return n;
    }
    default: return 0;
  }
}

int32_t field_offset(const StructDef& sd, const std::string& field,
                     const Program& p, TypePtr* field_type) {
  int32_t off = 0;
  for (const auto& f : sd.fields) {
    if (f.name == field) {
      if (field_type) *field_type = f.type;
      return off;
    }
    off += size_of(f.type, p);
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Typed load / store
// ---------------------------------------------------------------------------

namespace {

bool read_bytes(const MemState& m, int32_t b, int32_t off, int32_t n,
                uint64_t* out, bool* all_undef, std::string* err) {
  if (!m.valid(b, off, n)) {
    *err = "invalid memory access";
    return false;
  }
  const MemBlock& blk = m.blocks.at(b);
  uint64_t acc = 0;
  int undef = 0;
  for (int32_t i = 0; i < n; ++i) {
    const MemCell& c = blk.cells[off - blk.lo + i];
    if (c.k == MemCell::K::Undef) {
      undef++;
      continue;
    }
    if (c.k != MemCell::K::Byte) {
      *err = "reassembling a pointer as an integer";
      return false;
    }
    acc |= uint64_t(c.byte) << (8 * i);
  }
  if (undef == n) {
    *all_undef = true;
    return true;
  }
  if (undef != 0) {
    *err = "read of partially undefined value";
    return false;
  }
  *all_undef = false;
  *out = acc;
  return true;
}

void write_bytes(MemState& m, int32_t b, int32_t off, int32_t n, uint64_t v) {
  MemBlock& blk = m.blocks.at(b);
  for (int32_t i = 0; i < n; ++i) {
    MemCell& c = blk.cells[off - blk.lo + i];
    c = MemCell{};
    c.k = MemCell::K::Byte;
    c.byte = uint8_t(v >> (8 * i));
  }
}

// Store-side conversion: targets accept any arithmetic value (truncating /
// rounding as C assignment does); pointers accept pointers and literal zero.
bool convert_for_store(const TypePtr& t, const Value& v, Value* out,
                       std::string* err) {
  if (v.is_undef()) {
    *err = "store of undefined value";
    return false;
  }
  switch (t->kind) {
    case TypeKind::Char: case TypeKind::UChar:
    case TypeKind::Short: case TypeKind::UShort:
    case TypeKind::Int: case TypeKind::UInt:
    case TypeKind::Long: case TypeKind::ULong: {
      int64_t raw;
      if (v.is_int()) {
        raw = v.i;
      } else if (v.is_float()) {
        if (!std::isfinite(v.f) || v.f >= 9.3e18 || v.f <= -9.3e18) {
          *err = "float-to-int conversion out of range";
          return false;
        }
        raw = int64_t(v.f);  // truncation toward zero
      } else {
        *err = "pointer stored into integer";
        return false;
      }
      *out = Value::int_v(wrap_int(raw, t->int_width(), t->int_signed()),
                          t->int_width(), t->int_signed());
      return true;
    }
    case TypeKind::Float: {
      if (v.is_int()) { *out = Value::f32(double(v.i)); return true; }
      if (v.is_float()) { *out = Value::f32(v.f); return true; }
      *err = "pointer stored into float";
      return false;
    }
    case TypeKind::Double: {
      if (v.is_int()) { *out = Value::f64(double(v.i)); return true; }
      if (v.is_float()) { *out = Value::f64(v.f); return true; }
      *err = "pointer stored into double";
      return false;
    }
    case TypeKind::Pointer: {
      if (v.is_ptr()) { *out = v; return true; }
      if (v.is_int() && v.i == 0) { *out = Value::null_ptr(); return true; }
      *err = "non-pointer stored into pointer";
      return false;
    }
    default:
      *err = "store to non-scalar location";
      return false;
  }
}

}  // namespace

bool loadval(const TypePtr& t, const MemState& m, int32_t b, int32_t off,
             const Program& p, Value* out, std::string* err) {
  switch (t->kind) {
    case TypeKind::Char: case TypeKind::UChar:
    case TypeKind::Short: case TypeKind::UShort:
    case TypeKind::Int: case TypeKind::UInt:
    case TypeKind::Long: case TypeKind::ULong: {
      int w = t->int_width();
      uint64_t raw = 0;
      bool undef = false;
      if (!read_bytes(m, b, off, w / 8, &raw, &undef, err)) return false;
      if (undef) { *out = Value::undef(); return true; }
      *out = Value::int_v(wrap_int(int64_t(raw), w, t->int_signed()), w,
                          t->int_signed());
      return true;
    }
    case TypeKind::Float: {
      uint64_t raw = 0;
      bool undef = false;
      if (!read_bytes(m, b, off, 4, &raw, &undef, err)) return false;
      if (undef) { *out = Value::undef(); return true; }
      *out = Value::f32(double(std::bit_cast<float>(uint32_t(raw))));
      return true;
    }
    case TypeKind::Double: {
      uint64_t raw = 0;
      bool undef = false;
      if (!read_bytes(m, b, off, 8, &raw, &undef, err)) return false;
      if (undef) { *out = Value::undef(); return true; }
      *out = Value::f64(std::bit_cast<double>(raw));
      return true;
    }
    case TypeKind::Pointer: {
      if (!m.valid(b, off, 4)) { *err = "invalid memory access"; return false; }
      const MemBlock& blk = m.blocks.at(b);
      const MemCell* c0 = &blk.cells[off - blk.lo];
      int undef = 0;
      for (int i = 0; i < 4; ++i)
        if (c0[i].k == MemCell::K::Undef) undef++;
      if (undef == 4) { *out = Value::undef(); return true; }
      for (int i = 0; i < 4; ++i) {
        if (c0[i].k != MemCell::K::PtrFrag || c0[i].frag != i ||
            c0[i].pb != c0[0].pb || c0[i].poff != c0[0].poff) {
          *err = "reassembling a torn pointer";
          return false;
        }
      }
      *out = Value::ptr(c0[0].pb, c0[0].poff);
      return true;
    }
    case TypeKind::Array:  // access by reference: the location itself
      *out = Value::ptr(b, off);
      return true;
    default:
      *err = "load from non-scalar location";
      return false;
  }
}

bool storeval(const TypePtr& t, MemState& m, int32_t b, int32_t off,
              const Program& p, const Value& v, std::string* err) {
  Value cv;
  if (!convert_for_store(t, v, &cv, err)) return false;
  int32_t n = size_of(t, p);
  if (!m.valid(b, off, n)) {
    *err = "invalid memory access";
    return false;
  }
  switch (t->kind) {
    case TypeKind::Float:
      write_bytes(m, b, off, 4, std::bit_cast<uint32_t>(float(cv.f)));
      return true;
    case TypeKind::Double:
      write_bytes(m, b, off, 8, std::bit_cast<uint64_t>(cv.f));
      return true;
    case TypeKind::Pointer: {
      MemBlock& blk = m.blocks.at(b);
      for (int i = 0; i < 4; ++i) {
        MemCell& c = blk.cells[off - blk.lo + i];
        c = MemCell{};
        c.k = MemCell::K::PtrFrag;
        c.pb = cv.block;
        c.poff = cv.off;
        c.frag = uint8_t(i);
      }
      return true;
    }
    default:
      write_bytes(m, b, off, n, uint64_t(cv.i));
      return true;
  }
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

Interpreter::Interpreter(const Program& prog, ExternEnv externs, int64_t fuel)
    : prog_(prog), externs_(std::move(externs)), fuel_(fuel),
      fuel_left_(fuel) {
  for (const auto& f : prog_.funcs) {
    if (func_blocks_.count(f.name)) continue;
    int32_t b = mem_.alloc(0);
    mem_.blocks[b].is_func = true;
    mem_.blocks[b].func_name = f.name;
    func_blocks_[f.name] = b;
  }
}

bool Interpreter::fail(const std::string& msg) {
  if (err_.empty()) err_ = msg;
  return false;
}

bool Interpreter::lookup(const std::string& name, int32_t* b, TypePtr* t) {
  if (!frames_.empty()) {
    auto it = frames_.back().vars.find(name);
    if (it != frames_.back().vars.end()) {
      *b = it->second.first;
      *t = it->second.second;
      return true;
    }
  }
  auto it = globals_.vars.find(name);
  if (it != globals_.vars.end()) {
    *b = it->second.first;
    *t = it->second.second;
    return true;
  }
  return false;
}

void Interpreter::bind_global(const std::string& name, const TypePtr& t,
                              const Value& v) {
  int32_t b = mem_.alloc(size_of(t, prog_));
  globals_.vars[name] = {b, t};
  std::string err;
  if (!v.is_undef()) storeval(t, mem_, b, 0, prog_, v, &err);
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

bool Interpreter::eval_lvalue(const ExprPtr& e, int32_t* b, int32_t* off,
                              TypePtr* t, std::string* err) {
  switch (e->kind) {
    case ExprKind::Var: {
      count("C1");
      if (!lookup(e->name, b, t)) {
        *err = "unknown variable " + e->name;
        return false;
      }
      *off = 0;
      return true;
    }
    case ExprKind::Unary: {
      if (e->un_op != UnOp::Deref) {
        *err = "not an lvalue";
        return false;
      }
      count("C2");
      Value p;
      if (!eval_rvalue(e->kids[0], &p, err)) return false;
      if (!p.is_ptr() || p.is_null()) {
        *err = "dereference of non-pointer or null";
        return false;
      }
      *b = p.block;
      *off = p.off;
      TypePtr bt = e->kids[0]->type;
      *t = bt && bt->kind == TypeKind::Pointer ? bt->elem : e->type;
      return true;
    }
    case ExprKind::Index: {
      // Multi-dimensional access id[e1][e2] is the C14 sugar; a single
      // subscript is C13.
      if (e->kids[0]->kind == ExprKind::Index && e->kids[0]->type &&
          e->kids[0]->type->kind == TypeKind::Array)
        count("C14");
      else
        count("C13");
      Value n;
      if (!eval_rvalue(e->kids[1], &n, err)) return false;
      if (!n.is_int()) { *err = "non-integer array index"; return false; }
      TypePtr bt = e->kids[0]->type;
      TypePtr elem;
      int32_t bb = 0, bo = 0;
      if (bt && bt->kind == TypeKind::Array) {
        TypePtr at;
        if (!eval_lvalue(e->kids[0], &bb, &bo, &at, err)) return false;
        elem = bt->elem;
      } else {  // pointer base
        Value p;
        if (!eval_rvalue(e->kids[0], &p, err)) return false;
        if (!p.is_ptr() || p.is_null()) {
          *err = "indexing a non-pointer or null";
          return false;
        }
        bb = p.block;
        bo = p.off;
        elem = bt ? bt->elem : nullptr;
      }
      if (!elem) { *err = "indexing a non-array"; return false; }
      *b = bb;
      *off = bo + int32_t(n.i) * size_of(elem, prog_);
      *t = elem;
      return true;
    }
    case ExprKind::Field: {
      count("C3");
      int32_t bb, bo;
      TypePtr bt;
      if (!eval_lvalue(e->kids[0], &bb, &bo, &bt, err)) return false;
      if (!bt || bt->kind != TypeKind::Struct) {
        *err = "member access on non-struct";
        return false;
      }
      const StructDef* sd = prog_.find_struct(bt->struct_name);
      if (!sd) { *err = "unknown struct " + bt->struct_name; return false; }
      TypePtr ft;
      int32_t fo = field_offset(*sd, e->name, prog_, &ft);
      if (fo < 0) { *err = "unknown field " + e->name; return false; }
      *b = bb;
      *off = bo + fo;
      *t = ft;
      return true;
    }
    case ExprKind::Arrow: {
      count("C15");
      Value p;
      if (!eval_rvalue(e->kids[0], &p, err)) return false;
      if (!p.is_ptr() || p.is_null()) {
        *err = "arrow access through non-pointer or null";
        return false;
      }
      TypePtr bt = e->kids[0]->type;
      TypePtr st = bt && bt->kind == TypeKind::Pointer ? bt->elem : nullptr;
      if (!st || st->kind != TypeKind::Struct) {
        *err = "arrow access on non-struct pointer";
        return false;
      }
      const StructDef* sd = prog_.find_struct(st->struct_name);
      if (!sd) { *err = "unknown struct " + st->struct_name; return false; }
      TypePtr ft;
      int32_t fo = field_offset(*sd, e->name, prog_, &ft);
      if (fo < 0) { *err = "unknown field " + e->name; return false; }
      *b = p.block;
      *off = p.off + fo;
      *t = ft;
      return true;
    }
    default:
      *err = "not an lvalue";
      return false;
  }
}

bool Interpreter::eval_binop(BinOp op, const Value& a, const Value& b,
                             const TypePtr& ta, const TypePtr& tb,
                             Value* out) {
  auto ok_int = [&](int64_t n) {
    *out = Value::int_v(wrap_int(n, a.width, a.is_signed), a.width,
                        a.is_signed);
    return true;
  };
  auto ok_bool = [&](bool t) { *out = Value::int_v(t ? 1 : 0); return true; };

  if (op == BinOp::LogAnd || op == BinOp::LogOr) {
    // Total evaluation: both operands are evaluated by the caller.
    if (a.is_undef() || b.is_undef()) return fail("undefined operand");
    bool at = a.truthy(), bt = b.truthy();
    return ok_bool(op == BinOp::LogAnd ? (at && bt) : (at || bt));
  }
  if (a.is_undef() || b.is_undef()) return fail("undefined operand");

  // Pointer arithmetic: ptr ± int and int + ptr scale by the element size.
  if ((op == BinOp::Add || op == BinOp::Sub) && (a.is_ptr() || b.is_ptr())) {
    const Value* pv = a.is_ptr() ? &a : &b;
    const Value* nv = a.is_ptr() ? &b : &a;
    const TypePtr& pt = a.is_ptr() ? ta : tb;
    if (!nv->is_int()) return fail("pointer combined with non-integer");
    if (op == BinOp::Sub && !a.is_ptr())
      return fail("integer minus pointer");
    TypePtr elem = pt && pt->kind == TypeKind::Pointer ? pt->elem
                   : pt && pt->kind == TypeKind::Array ? pt->elem
                                                       : nullptr;
    if (!elem) return fail("pointer arithmetic without element type");
    int64_t d = nv->i * size_of(elem, prog_);
    if (op == BinOp::Sub) d = -d;
    *out = Value::ptr(pv->block, int32_t(pv->off + d));
    return true;
  }

  if (op == BinOp::Eq || op == BinOp::Ne) {
    if (a.is_ptr() || b.is_ptr()) {
      bool an = a.is_ptr() ? false : true;  // non-pointer side must be 0
      if (an && !(a.is_int() && a.i == 0)) return fail("pointer compared with integer");
      if (!b.is_ptr() && !(b.is_int() && b.i == 0))
        return fail("pointer compared with integer");
      Value pa = a.is_ptr() ? a : Value::null_ptr();
      Value pb = b.is_ptr() ? b : Value::null_ptr();
      bool eq = pa.block == pb.block && pa.off == pb.off;
      return ok_bool(op == BinOp::Eq ? eq : !eq);
    }
  }
  if (op == BinOp::Lt || op == BinOp::Gt || op == BinOp::Le ||
      op == BinOp::Ge) {
    if (a.is_ptr() && b.is_ptr()) {
      if (a.block != b.block)
        return fail("relational comparison of unrelated pointers");
      int32_t x = a.off, y = b.off;
      switch (op) {
        case BinOp::Lt: return ok_bool(x < y);
        case BinOp::Gt: return ok_bool(x > y);
        case BinOp::Le: return ok_bool(x <= y);
        default: return ok_bool(x >= y);
      }
    }
    if (a.is_ptr() || b.is_ptr()) return fail("pointer compared with number");
  }

  // Strict arithmetic: integer operands must agree in width and signedness;
  // floats must agree in precision. No implicit promotion.
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
        return ok_int(x / y);  // truncation toward zero
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

bool Interpreter::eval_rvalue(const ExprPtr& e, Value* out, std::string* err) {
  std::string local_err;
  if (!err) err = &local_err;
  switch (e->kind) {
    case ExprKind::IntLit:
    case ExprKind::CharLit: {
      count("C4");
      TypePtr t = e->type;
      int w = t && t->is_integer() ? t->int_width() : 32;
      bool sg = t && t->is_integer() ? t->int_signed() : true;
      *out = Value::int_v(wrap_int(e->int_val, w, sg), w, sg);
      return true;
    }
    case ExprKind::FloatLit: {
      count("C4");
      if (e->type && e->type->kind == TypeKind::Float)
        *out = Value::f32(e->float_val);
      else
        *out = Value::f64(e->float_val);
      return true;
    }
    case ExprKind::Var: {
      auto fb = func_blocks_.find(e->name);
      int32_t b;
      TypePtr t;
      if (fb != func_blocks_.end() && !lookup(e->name, &b, &t)) {
        count("C4");
        *out = Value::ptr(fb->second, 0);  // function designator
        return true;
      }
      break;  // fall through to lvalue + load
    }
    case ExprKind::Unary: {
      if (e->name == "cast") {
        count("C11");
        Value v;
        if (!eval_rvalue(e->kids[0], &v, err)) return false;
        return cast_value(v, e->kids[0]->type, e->type, out, err);
      }
      if (e->un_op == UnOp::AddrOf) {
        count("C6");
        if (e->kids[0]->kind == ExprKind::Var &&
            func_blocks_.count(e->kids[0]->name)) {
          int32_t b;
          TypePtr t;
          if (!lookup(e->kids[0]->name, &b, &t)) {
            *out = Value::ptr(func_blocks_[e->kids[0]->name], 0);
            return true;
          }
        }
        int32_t b, off;
        TypePtr t;
        if (!eval_lvalue(e->kids[0], &b, &off, &t, err)) return false;
        *out = Value::ptr(b, off);
        return true;
      }
      if (e->un_op == UnOp::Deref) break;  // lvalue + load
      count("C7");
      Value v;
      if (!eval_rvalue(e->kids[0], &v, err)) return false;
      if (v.is_undef()) { *err = "undefined operand"; return false; }
      switch (e->un_op) {
        case UnOp::Neg:
          if (v.is_int()) {
            *out = Value::int_v(wrap_int(-v.i, v.width, v.is_signed), v.width,
                                v.is_signed);
          } else if (v.is_float()) {
            *out = v;
            out->f = -out->f;
          } else {
            *err = "negation of a pointer";
            return false;
          }
          return true;
        case UnOp::Not:
          if (!v.is_int() && !v.is_float() && !v.is_ptr()) {
            *err = "logical not of non-scalar";
            return false;
          }
          *out = Value::int_v(v.truthy() ? 0 : 1);
          return true;
        case UnOp::BitNot:
          if (!v.is_int()) { *err = "bitwise not of non-integer"; return false; }
          *out = Value::int_v(wrap_int(~v.i, v.width, v.is_signed), v.width,
                              v.is_signed);
          return true;
        default:
          *err = "unsupported unary operator";
          return false;
      }
    }
    case ExprKind::Binary: {
      count("C8");
      Value a, b;
      if (!eval_rvalue(e->kids[0], &a, err)) return false;
      if (!eval_rvalue(e->kids[1], &b, err)) return false;
      if (!eval_binop(e->bin_op, a, b, e->kids[0]->type, e->kids[1]->type,
                      out)) {
        *err = err_.empty() ? "bad binary operation" : err_;
        err_.clear();
        return false;
      }
      return true;
    }
    case ExprKind::Cond: {
      Value c;
      if (!eval_rvalue(e->kids[0], &c, err)) return false;
      if (c.is_undef()) { *err = "undefined condition"; return false; }
      count(c.truthy() ? "C9" : "C10");
      return eval_rvalue(c.truthy() ? e->kids[1] : e->kids[2], out, err);
    }
    case ExprKind::Call: {
      count("C12");
      if (!call_by_expr(e, out, true)) {
        *err = err_;
        err_.clear();
        return false;
      }
      return true;
    }
    default: break;
  }
  // Left-value expressions in right-value position: evaluate and load (C5).
  count("C5");
  int32_t b, off;
  TypePtr t;
  if (!eval_lvalue(e, &b, &off, &t, err)) return false;
  Value v;
  if (!loadval(t, mem_, b, off, prog_, &v, err)) return false;
  if (v.is_undef()) { *err = "read of undefined value"; return false; }
  *out = v;
  return true;
}

bool Interpreter::cast_value(const Value& v, const TypePtr& from,
                             const TypePtr& to, Value* out, std::string* err) {
  if (v.is_undef()) { *err = "cast of undefined value"; return false; }
  if (!to) { *err = "cast to unknown type"; return false; }
  if (to->is_integer()) {
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
      *err = "cast of pointer to integer";
      return false;
    }
    *out = Value::int_v(wrap_int(raw, to->int_width(), to->int_signed()),
                        to->int_width(), to->int_signed());
    return true;
  }
  if (to->kind == TypeKind::Float || to->kind == TypeKind::Double) {
    double x;
    if (v.is_int()) x = double(v.i);
    else if (v.is_float()) x = v.f;
    else { *err = "cast of pointer to float"; return false; }
    *out = to->kind == TypeKind::Float ? Value::f32(x) : Value::f64(x);
    return true;
  }
  if (to->kind == TypeKind::Pointer) {
    if (v.is_ptr()) { *out = v; return true; }
    if (v.is_int() && v.i == 0) { *out = Value::null_ptr(); return true; }
    *err = "cast of non-pointer to pointer";
    return false;
  }
  *err = "unsupported cast";
  return false;
}

// ---------------------------------------------------------------------------
// Calls
// ---------------------------------------------------------------------------

bool Interpreter::call_by_expr(const ExprPtr& call, Value* ret,
                               bool expression_position) {
  // Resolve the callee to a function designator pointer (rule T24).
  const ExprPtr& callee = call->kids[0];
  int32_t fblock = 0;
  {
    int32_t b;
    TypePtr t;
    if (callee->kind == ExprKind::Var && func_blocks_.count(callee->name) &&
        !lookup(callee->name, &b, &t)) {
      fblock = func_blocks_[callee->name];
    } else {
      Value fv;
      std::string err;
      if (!eval_rvalue(callee, &fv, &err)) return fail(err);
      if (!fv.is_ptr() || fv.off != 0) return fail("call through non-function");
      fblock = fv.block;
    }
  }
  auto bit = mem_.blocks.find(fblock);
  if (bit == mem_.blocks.end() || !bit->second.is_func)
    return fail("call through non-function pointer");
  const FuncDef* f = prog_.find_func(bit->second.func_name);
  if (!f) return fail("unknown function " + bit->second.func_name);

  std::vector<Value> args;
  for (size_t i = 1; i < call->kids.size(); ++i) {
    Value v;
    std::string err;
    if (!eval_rvalue(call->kids[i], &v, &err)) return fail(err);
    args.push_back(v);
  }
  count("T24");

  // A call in expression position must leave memory untouched.
  MemState before;
  if (expression_position) before = mem_;

  Outcome out;
  bool is_ext = false;
  if (!call_function(*f, args, &out, &is_ext)) return false;
  if (expression_position && !mem_.same_contents(before))
    return fail("function with side effects called in expression position");

  if (out.k == Outcome::K::ReturnValue) {
    std::string err;
    Value cv;
    if (f->ret && f->ret->is_scalar()) {
      if (!convert_for_store(f->ret, out.v, &cv, &err))
        return fail("bad return value: " + err);
    } else {
      cv = out.v;
    }
    *ret = cv;
  } else {
    *ret = Value::undef();
  }
  return true;
}

bool Interpreter::call_function(const FuncDef& f,
                                const std::vector<Value>& args, Outcome* out,
                                bool* is_extern_call) {
  if (f.is_extern) {
    count("T26");
    *is_extern_call = true;
    Value res;
    std::string err;
    if (!externs_.call(f.name, args, &res, &err)) return fail(err);
    *out = Outcome{Outcome::K::ReturnValue, res};
    return true;
  }
  *is_extern_call = false;
  count("T25");
  if (frames_.size() > 2000) return fail("call depth exceeded");
  if (args.size() != f.params.size()) return fail("wrong argument count");

  Env frame;
  std::vector<int32_t> blocks;
  for (const auto& p : f.params) {
    int32_t b = mem_.alloc(size_of(p.type, prog_));
    frame.vars[p.name] = {b, p.type};
    blocks.push_back(b);
  }
  for (const auto& l : f.locals) {
    int32_t b = mem_.alloc(size_of(l.type, prog_));
    frame.vars[l.name] = {b, l.type};
    blocks.push_back(b);
  }
  for (size_t i = 0; i < args.size(); ++i) {
    std::string err;
    if (!storeval(f.params[i].type, mem_, frame.vars[f.params[i].name].first,
                  0, prog_, args[i], &err))
      return fail("binding parameter " + f.params[i].name + ": " + err);
  }
  frames_.push_back(std::move(frame));
  bool ok = init_locals(f.locals) && exec_seq(f.body, out);
  Env finished = std::move(frames_.back());
  frames_.pop_back();
  if (!ok) return false;
  if (out->k == Outcome::K::Break || out->k == Outcome::K::Continue)
    return fail("break/continue escaped a function body");
  for (int32_t b : blocks) mem_.free_block(b);
  return true;
}

bool Interpreter::init_locals(const std::vector<VarDecl>& decls) {
  for (const auto& d : decls) {
    int32_t b, off = 0;
    TypePtr t;
    if (!lookup(d.name, &b, &t)) return fail("missing local " + d.name);
    std::string err;
    if (d.init) {
      Value v;
      if (!eval_rvalue(d.init, &v, &err)) return fail(err);
      if (!storeval(t, mem_, b, 0, prog_, v, &err))
        return fail("initializing " + d.name + ": " + err);
    } else if (d.has_init_list) {
      if (!store_init_list(t, b, d.init_list)) return false;
    }
  }
  return true;
}

// Element-wise aggregate initialization in flat row-major scalar order.
bool Interpreter::store_init_list(const TypePtr& t, int32_t b,
                                  const std::vector<ExprPtr>& inits) {
  std::vector<std::pair<TypePtr, int32_t>> slots;  // scalar (type, offset)
  std::function<void(const TypePtr&, int32_t)> flatten =
      [&](const TypePtr& ty, int32_t off) {
        if (ty->kind == TypeKind::Array) {
          int32_t es = size_of(ty->elem, prog_);
          for (int i = 0; i < ty->array_size; ++i)
            flatten(ty->elem, off + i * es);
        } else if (ty->kind == TypeKind::Struct) {
          const StructDef* sd = prog_.find_struct(ty->struct_name);
          if (!sd) return;
          int32_t off2 = off;
          for (const auto& fl : sd->fields) {
            flatten(fl.type, off2);
            off2 += size_of(fl.type, prog_);
          }
        } else {
          slots.emplace_back(ty, off);
        }
      };
  flatten(t, 0);
  if (inits.size() > slots.size()) return fail("too many initializers");
  for (size_t i = 0; i < inits.size(); ++i) {
    Value v;
    std::string err;
    if (!eval_rvalue(inits[i], &v, &err)) return fail(err);
    if (!storeval(slots[i].first, mem_, b, slots[i].second, prog_, v, &err))
      return fail("initializer: " + err);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

bool Interpreter::use_fuel() {
  if (--fuel_left_ < 0) {
    timed_out_ = true;
    return fail("fuel exhausted");
  }
  return true;
}

bool Interpreter::exec_seq(const std::vector<StmtPtr>& body, Outcome* out) {
  *out = Outcome::normal();
  for (size_t i = 0; i < body.size(); ++i) {
    if (!exec_stmt(body[i], out)) return false;
    if (i + 1 < body.size()) {
      if (out->k == Outcome::K::Normal) {
        count("T7");
      } else {
        count("T8");
        return true;
      }
    }
  }
  return true;
}

bool Interpreter::exec_stmt(const StmtPtr& s, Outcome* out) {
  if (!use_fuel()) return false;
  *out = Outcome::normal();
  switch (s->kind) {
    case StmtKind::Null:
      count("T1");
      return true;
    case StmtKind::Break:
      count("T2");
      out->k = Outcome::K::Break;
      return true;
    case StmtKind::Continue:
      count("T3");
      out->k = Outcome::K::Continue;
      return true;
    case StmtKind::Return: {
      if (!s->expr) {
        count("T4");
        out->k = Outcome::K::Return;
        return true;
      }
      count("T5");
      Value v;
      std::string err;
      if (!eval_rvalue(s->expr, &v, &err)) return fail(err);
      out->k = Outcome::K::ReturnValue;
      out->v = v;
      return true;
    }
    case StmtKind::ExprAssign:
    case StmtKind::PostInc:
    case StmtKind::PostDec: {
      count("T6");
      int32_t b, off;
      TypePtr t;
      std::string err;
      if (!eval_lvalue(s->lhs, &b, &off, &t, &err)) return fail(err);
      Value v;
      if (s->kind == StmtKind::ExprAssign) {
        if (!eval_rvalue(s->expr, &v, &err)) return fail(err);
      } else {
        Value cur;
        if (!loadval(t, mem_, b, off, prog_, &cur, &err)) return fail(err);
        if (cur.is_undef()) return fail("read of undefined value");
        Value one = Value::int_v(1, cur.is_int() ? cur.width : 32,
                                 cur.is_int() ? cur.is_signed : true);
        if (!eval_binop(s->kind == StmtKind::PostInc ? BinOp::Add : BinOp::Sub,
                        cur, one, t, nullptr, &v))
          return false;
      }
      if (!storeval(t, mem_, b, off, prog_, v, &err)) return fail(err);
      return true;
    }
    case StmtKind::CallStmt: {
      Value ignored;
      return call_by_expr(s->expr, &ignored, false);
    }
    case StmtKind::Block:
      return exec_seq(s->body, out);
    case StmtKind::If: {
      Value c;
      std::string err;
      if (!eval_rvalue(s->cond, &c, &err)) return fail(err);
      if (c.is_undef()) return fail("undefined condition");
      count(c.truthy() ? "T9" : "T10");
      return exec_seq(c.truthy() ? s->body : s->else_body, out);
    }
    case StmtKind::While:
    case StmtKind::DoWhile: {
      bool first = s->kind == StmtKind::DoWhile;
      while (true) {
        if (!first) {
          Value c;
          std::string err;
          if (!eval_rvalue(s->cond, &c, &err)) return fail(err);
          if (c.is_undef()) return fail("undefined condition");
          if (!c.truthy()) {
            count("T11");
            out->k = Outcome::K::Normal;
            return true;
          }
        }
        first = false;
        Outcome body_out;
        if (!exec_seq(s->body, &body_out)) return false;
        if (body_out.k == Outcome::K::Break) {
          count("T12");
          out->k = Outcome::K::Normal;  // Break ~~> Normal
          return true;
        }
        if (body_out.k == Outcome::K::Return ||
            body_out.k == Outcome::K::ReturnValue) {
          count("T12");
          *out = body_out;
          return true;
        }
        count("T13");  // Normal | Continue: iterate
        if (!use_fuel()) return false;
      }
    }
    case StmtKind::For: {
      if (s->for_init) {
        count("T14");
        Outcome init_out;
        if (!exec_stmt(s->for_init, &init_out)) return false;
      }
      while (true) {
        if (s->cond) {
          Value c;
          std::string err;
          if (!eval_rvalue(s->cond, &c, &err)) return fail(err);
          if (c.is_undef()) return fail("undefined condition");
          if (!c.truthy()) {
            count("T15");
            out->k = Outcome::K::Normal;
            return true;
          }
        }
        Outcome body_out;
        if (!exec_seq(s->body, &body_out)) return false;
        if (body_out.k == Outcome::K::Break) {
          count("T16");
          out->k = Outcome::K::Normal;
          return true;
        }
        if (body_out.k == Outcome::K::Return ||
            body_out.k == Outcome::K::ReturnValue) {
          count("T16");
          *out = body_out;
          return true;
        }
        count("T17");
        if (s->for_step) {
          Outcome step_out;
          if (!exec_stmt(s->for_step, &step_out)) return false;
        }
        if (!use_fuel()) return false;
      }
    }
    case StmtKind::Switch:
      return exec_switch(*s, out);
    default:
      return fail("statement outside the executable subset");
  }
}

bool Interpreter::exec_switch(const Stmt& s, Outcome* out) {
  Value v;
  std::string err;
  if (!eval_rvalue(s.cond, &v, &err)) return fail(err);
  if (!v.is_int()) return fail("switch on non-integer");

  size_t start = s.cases.size();
  for (size_t i = 0; i < s.cases.size(); ++i) {
    if (!s.cases[i].is_default && s.cases[i].label == v.i) {
      start = i;
      break;
    }
  }
  if (start < s.cases.size()) {
    count("T22");
  } else {
    count("T23");
    for (size_t i = 0; i < s.cases.size(); ++i)
      if (s.cases[i].is_default) { start = i; break; }
    if (start == s.cases.size()) return fail("switch without default");
  }

  Outcome arm_out = Outcome::normal();
  for (size_t i = start; i < s.cases.size(); ++i) {
    count(s.cases[i].is_default ? "T18" : "T19");
    if (!exec_seq(s.cases[i].body, &arm_out)) return false;
    if (arm_out.k != Outcome::K::Normal) {
      if (i + 1 < s.cases.size()) count("T21");
      break;
    }
    if (i + 1 < s.cases.size()) count("T20");  // fall through
  }
  // Outcome update at the end of the switch: Break becomes Normal.
  if (arm_out.k == Outcome::K::Break) arm_out.k = Outcome::K::Normal;
  *out = arm_out;
  return true;
}

// ---------------------------------------------------------------------------
// Whole-program runs
// ---------------------------------------------------------------------------

bool Interpreter::collect_snapshot(const Env& env, RunResult* rr) {
  for (const auto& [name, bt] : env.vars) {
    const auto& [block, type] = bt;
    rr->var_blocks[name] = block;
    std::function<bool(const TypePtr&, const std::string&, int32_t)> walk =
        [&](const TypePtr& t, const std::string& path, int32_t off) -> bool {
      if (t->kind == TypeKind::Array) {
        int32_t es = size_of(t->elem, prog_);
        for (int i = 0; i < t->array_size; ++i)
          if (!walk(t->elem, path + "[" + std::to_string(i) + "]",
                    off + i * es))
            return false;
        return true;
      }
      if (t->kind == TypeKind::Struct) {
        const StructDef* sd = prog_.find_struct(t->struct_name);
        if (!sd) return true;
        int32_t o = off;
        for (const auto& fl : sd->fields) {
          if (!walk(fl.type, path + "." + fl.name, o)) return false;
          o += size_of(fl.type, prog_);
        }
        return true;
      }
      Value v;
      std::string err;
      if (!loadval(t, mem_, block, off, prog_, &v, &err))
        v = Value::undef();  // torn values render as undefined in snapshots
      rr->snapshot.push_back({path, v, block, off});
      return true;
    };
    walk(type, name, 0);
  }
  return true;
}

RunResult Interpreter::run() {
  RunResult rr;
  auto finish_error = [&]() {
    rr.k = timed_out_ ? RunResult::K::Timeout : RunResult::K::RuntimeError;
    rr.error = err_;
    rr.trace = externs_.trace();
    rr.rule_counts = rules_;
    return rr;
  };

  // Global environment and initial memory, in declaration order.
  for (const auto& g : prog_.globals) {
    int32_t b = mem_.alloc(size_of(g.type, prog_));
    globals_.vars[g.name] = {b, g.type};
  }
  for (const auto& g : prog_.globals) {
    std::string err;
    int32_t b = globals_.vars[g.name].first;
    if (g.init) {
      Value v;
      if (!eval_rvalue(g.init, &v, &err)) { fail(err); return finish_error(); }
      if (!storeval(g.type, mem_, b, 0, prog_, v, &err)) {
        fail("initializing " + g.name + ": " + err);
        return finish_error();
      }
    } else if (g.has_init_list) {
      if (!store_init_list(g.type, b, g.init_list)) return finish_error();
    }
  }

  const FuncDef* mainf = prog_.find_func("main");
  if (!mainf || mainf->is_extern) {
    fail("no main function");
    return finish_error();
  }

  // Inline invocation of main so the observable snapshot can be taken
  // between body completion and frame deallocation.
  count("T25");
  Env frame;
  std::vector<int32_t> blocks;
  for (const auto& l : mainf->locals) {
    int32_t b = mem_.alloc(size_of(l.type, prog_));
    frame.vars[l.name] = {b, l.type};
    blocks.push_back(b);
  }
  frames_.push_back(std::move(frame));
  Outcome out;
  bool ok = init_locals(mainf->locals) && exec_seq(mainf->body, &out);
  if (ok && (out.k == Outcome::K::Break || out.k == Outcome::K::Continue))
    ok = fail("break/continue escaped main");
  if (!ok) {
    frames_.pop_back();
    return finish_error();
  }

  rr.k = RunResult::K::Exit;
  rr.exit_code = out.k == Outcome::K::ReturnValue && out.v.is_int() ? out.v.i
                                                                    : 0;
  collect_snapshot(globals_, &rr);
  collect_snapshot(frames_.back(), &rr);
  rr.func_blocks = func_blocks_;
  frames_.pop_back();
  for (int32_t b : blocks) mem_.free_block(b);
  rr.trace = externs_.trace();
  rr.rule_counts = rules_;
  return rr;
}

RunResult run_program(const Program& prog, ExternEnv externs, int64_t fuel) {
  Interpreter in(prog, std::move(externs), fuel);
  return in.run();
}

}  // namespace c2m::xdc
