#pragma once

#include <cstdint>
#include <string>

namespace c2m {

// Runtime value shared by both interpreters. Integers carry their width and
// signedness so arithmetic can stay strict (operands must agree; results wrap
// two's-complement at the operand width). Pointers are (block, byte offset);
// block 0 is the null block.
struct Value {
  enum class Kind { Undef, Int, F32, F64, Ptr } kind = Kind::Undef;
  int width = 32;          // 8, 16 or 32 (Kind::Int only)
  bool is_signed = true;   // Kind::Int only
  int64_t i = 0;           // canonical: sign- or zero-extended to 64 bits
  double f = 0.0;          // Kind::F32/F64 (F32 stored pre-rounded to float)
  int32_t block = 0;       // Kind::Ptr
  int32_t off = 0;         // Kind::Ptr

  static Value undef() { return {}; }
  static Value int_v(int64_t n, int w = 32, bool sgn = true);
  static Value f32(double x);
  static Value f64(double x) {
    Value v; v.kind = Kind::F64; v.f = x; return v;
  }
  static Value ptr(int32_t b, int32_t o) {
    Value v; v.kind = Kind::Ptr; v.block = b; v.off = o; return v;
  }
  static Value null_ptr() { return ptr(0, 0); }

  bool is_undef() const { return kind == Kind::Undef; }
  bool is_int() const { return kind == Kind::Int; }
  bool is_float() const { return kind == Kind::F32 || kind == Kind::F64; }
  bool is_ptr() const { return kind == Kind::Ptr; }
  bool is_null() const { return kind == Kind::Ptr && block == 0; }

  // Truth notion shared by both languages: nonzero / non-null.
  bool truthy() const;

  bool same_as(const Value& o) const;  // exact structural equality
  std::string show() const;            // debug / trace rendering
};

// Wrap an arbitrary 64-bit integer to the given width/signedness, producing
// the canonical extended representation.
int64_t wrap_int(int64_t n, int width, bool is_signed);

}  // namespace c2m
