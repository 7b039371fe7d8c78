#include "c2m/xdc_ast.hpp"

namespace c2m::xdc {

bool Type::is_integer() const {
  switch (kind) {
    case TypeKind::Char: case TypeKind::UChar:
    case TypeKind::Short: case TypeKind::UShort:
    case TypeKind::Int: case TypeKind::UInt:
    case TypeKind::Long: case TypeKind::ULong:
      return true;
    default:
      return false;
  }
}

bool Type::is_arith() const {
  return is_integer() || kind == TypeKind::Float || kind == TypeKind::Double;
}

bool Type::is_scalar() const { return is_arith() || kind == TypeKind::Pointer; }

int Type::int_width() const {
  switch (kind) {
    case TypeKind::Char: case TypeKind::UChar: return 8;
    case TypeKind::Short: case TypeKind::UShort: return 16;
    default: return 32;
  }
}

bool Type::int_signed() const {
  switch (kind) {
    case TypeKind::UChar: case TypeKind::UShort:
    case TypeKind::UInt: case TypeKind::ULong:
      return false;
    default:
      return true;
  }
}

std::string Type::show() const {
  switch (kind) {
    case TypeKind::Void: return "void";
    case TypeKind::Char: return "char";
    case TypeKind::UChar: return "unsigned char";
    case TypeKind::Short: return "short";
    case TypeKind::UShort: return "unsigned short";
    case TypeKind::Int: return "int";
    case TypeKind::UInt: return "unsigned int";
    case TypeKind::Long: return "long";
    case TypeKind::ULong: return "unsigned long";
    case TypeKind::Float: return "float";
    case TypeKind::Double: return "double";
    case TypeKind::Pointer: return elem->show() + " *";
    case TypeKind::Array:
      return elem->show() + "[" + std::to_string(array_size) + "]";
    case TypeKind::Struct: return "struct " + struct_name;
    case TypeKind::Func: return "function";
  }
  return "?";
}

TypePtr make_type(TypeKind k) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  return t;
}
TypePtr make_ptr(TypePtr elem) {
  auto t = make_type(TypeKind::Pointer);
  t->elem = std::move(elem);
  return t;
}
TypePtr make_array(TypePtr elem, int n) {
  auto t = make_type(TypeKind::Array);
  t->elem = std::move(elem);
  t->array_size = n;
  return t;
}
TypePtr make_struct(const std::string& name) {
  auto t = make_type(TypeKind::Struct);
  t->struct_name = name;
  return t;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Pointer: return type_equal(a->elem, b->elem);
    case TypeKind::Array:
      return a->array_size == b->array_size && type_equal(a->elem, b->elem);
    case TypeKind::Struct: return a->struct_name == b->struct_name;
    case TypeKind::Func: {
      if (!type_equal(a->elem, b->elem)) return false;
      if (a->params.size() != b->params.size()) return false;
      for (size_t i = 0; i < a->params.size(); ++i)
        if (!type_equal(a->params[i], b->params[i])) return false;
      return true;
    }
    default: return true;
  }
}

ExprPtr make_expr(ExprKind k, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = s;
  return e;
}

StmtPtr make_stmt(StmtKind k, Span s) {
  auto st = std::make_shared<Stmt>();
  st->kind = k;
  st->span = s;
  return st;
}

const FuncDef* Program::find_func(const std::string& n) const {
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
  auto add_s = [&](const StmtPtr& st) { if (st) n += count_nodes(*st); };
  add_e(s.lhs); add_e(s.expr); add_e(s.cond);
  for (const auto& k : s.body) add_s(k);
  for (const auto& k : s.else_body) add_s(k);
  add_s(s.for_init); add_s(s.for_step);
  for (const auto& c : s.cases) {
    n += 1;
    for (const auto& k : c.body) add_s(k);
  }
  for (const auto& d : s.decls) {
    n += 1;
    if (d.init) n += count_nodes(*d.init);
    for (const auto& i : d.init_list) n += count_nodes(*i);
  }
  return n;
}

int count_nodes(const Program& p) {
  int n = 0;
  for (const auto& s : p.structs) n += 1 + static_cast<int>(s.fields.size());
  for (const auto& g : p.globals) {
    n += 1;
    if (g.init) n += count_nodes(*g.init);
    for (const auto& i : g.init_list) n += count_nodes(*i);
  }
  for (const auto& f : p.funcs) {
    n += 1 + static_cast<int>(f.params.size());
    for (const auto& d : f.locals) {
      n += 1;
      if (d.init) n += count_nodes(*d.init);
      for (const auto& i : d.init_list) n += count_nodes(*i);
    }
    for (const auto& s : f.body)
      if (s) n += count_nodes(*s);
  }
  return n;
}

}  // namespace c2m::xdc
