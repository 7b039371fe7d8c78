#include "c2m/value.hpp"

#include <cmath>
#include <cstdio>

namespace c2m {

int64_t wrap_int(int64_t n, int width, bool is_signed) {
  uint64_t mask = (width >= 64) ? ~0ull : ((1ull << width) - 1);
  uint64_t u = static_cast<uint64_t>(n) & mask;
  if (is_signed && width < 64 && (u & (1ull << (width - 1))))
    return static_cast<int64_t>(u | ~mask);  // sign-extend
  return static_cast<int64_t>(u);
}

Value Value::int_v(int64_t n, int w, bool sgn) {
  Value v;
  v.kind = Kind::Int;
  v.width = w;
  v.is_signed = sgn;
  v.i = wrap_int(n, w, sgn);
  return v;
}

Value Value::f32(double x) {
  Value v;
  v.kind = Kind::F32;
  v.f = static_cast<double>(static_cast<float>(x));
  return v;
}

bool Value::truthy() const {
  switch (kind) {
    case Kind::Int: return i != 0;
    case Kind::F32:
    case Kind::F64: return f != 0.0;
    case Kind::Ptr: return block != 0;
    case Kind::Undef: return false;
  }
  return false;
}

bool Value::same_as(const Value& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Undef: return true;
    case Kind::Int: return i == o.i && width == o.width && is_signed == o.is_signed;
    case Kind::F32:
    case Kind::F64: return f == o.f || (std::isnan(f) && std::isnan(o.f));
    case Kind::Ptr: return block == o.block && off == o.off;
  }
  return false;
}

std::string Value::show() const {
  char buf[64];
  switch (kind) {
    case Kind::Undef: return "undef";
    case Kind::Int:
      if (is_signed)
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(i));
      else
        std::snprintf(buf, sizeof buf, "%lluu",
                      static_cast<unsigned long long>(i));
      return buf;
    case Kind::F32:
    case Kind::F64:
      std::snprintf(buf, sizeof buf, "%.17g", f);
      return buf;
    case Kind::Ptr:
      if (block == 0) return "null";
      std::snprintf(buf, sizeof buf, "ptr(%d,%d)", block, off);
      return buf;
  }
  return "?";
}

}  // namespace c2m
