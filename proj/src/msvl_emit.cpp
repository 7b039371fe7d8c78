#include <cmath>
#include <cstdio>
#include <sstream>

#include "c2m/msvl_ast.hpp"

// Canonical text emission. The layout is byte-stable: four-space indentation,
// chop = ";" + newline, conjunction = " and " on one line, every non-atomic
// binary operand parenthesized.

namespace c2m::msvl {

namespace {

std::string emit_number(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s = buf;
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

const char* bin_op_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

bool atomic(const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
    case ExprKind::CharLit:
    case ExprKind::True:
    case ExprKind::False:
    case ExprKind::Var:
    case ExprKind::Index:
    case ExprKind::Field:
    case ExprKind::Arrow:
    case ExprKind::Prev:
    case ExprKind::ExtCall:
    case ExprKind::CondExpr:  // always self-parenthesized
      return true;
    case ExprKind::Binary:
      // and/or render self-parenthesized so they survive re-parsing in
      // positions where a bare "and" would read as a statement conjunction.
      return e.bin_op == BinOp::And || e.bin_op == BinOp::Or;
    default:
      return false;
  }
}

std::string emit_e(const Expr& e);
std::string spell_decl(const TypePtr& t, const std::string& name);

std::string wrap(const ExprPtr& e) {
  std::string s = emit_e(*e);
  if (atomic(*e)) return s;
  return "(" + s + ")";
}

std::string emit_e(const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::CharLit:
      return std::to_string(e.int_val);
    case ExprKind::FloatLit:
      return emit_number(e.float_val);
    case ExprKind::True: return "true";
    case ExprKind::False: return "false";
    case ExprKind::Var: return e.name;
    case ExprKind::Index:
      return emit_e(*e.kids[0]) + "[" + emit_e(*e.kids[1]) + "]";
    case ExprKind::Field:
      return emit_e(*e.kids[0]) + "." + e.name;
    case ExprKind::Arrow:
      return emit_e(*e.kids[0]) + "->" + e.name;
    case ExprKind::Deref:
      return "*" + wrap(e.kids[0]);
    case ExprKind::AddrOf:
      return "&" + wrap(e.kids[0]);
    case ExprKind::Unary: {
      const char* op = e.un_op == UnOp::Neg ? "-"
                       : e.un_op == UnOp::Not ? "!"
                                              : "~";
      return op + wrap(e.kids[0]);
    }
    case ExprKind::Binary: {
      std::string s = wrap(e.kids[0]) + " " + bin_op_text(e.bin_op) + " " +
                      wrap(e.kids[1]);
      if (e.bin_op == BinOp::And || e.bin_op == BinOp::Or)
        return "(" + s + ")";
      return s;
    }
    case ExprKind::CondExpr:
      return "(if (" + emit_e(*e.kids[0]) + ") then " + wrap(e.kids[1]) +
             " else " + wrap(e.kids[2]) + ")";
    case ExprKind::Prev:
      return "prev(" + emit_e(*e.kids[0]) + ")";
    case ExprKind::Cast:
      return "(" + spell_decl(e.cast_type, "") + ")" + wrap(e.kids[0]);
    case ExprKind::ExtCall: {
      std::string s = "ext " + e.name + "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) s += ", ";
        s += emit_e(*e.kids[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

// Declaration spelling: type around a name (C-like, incl. arrays / pointers).
std::string spell_decl(const TypePtr& t, const std::string& name) {
  using xdc::TypeKind;
  if (!t) return "? " + name;
  switch (t->kind) {
    case TypeKind::Array: {
      std::string dims;
      TypePtr cur = t;
      while (cur->kind == TypeKind::Array) {
        dims += "[" + std::to_string(cur->array_size) + "]";
        cur = cur->elem;
      }
      return spell_decl(cur, name + dims);
    }
    case TypeKind::Pointer:
      if (t->elem && t->elem->kind == TypeKind::Func) {
        std::string params;
        for (size_t i = 0; i < t->elem->params.size(); ++i) {
          if (i) params += ", ";
          params += spell_decl(t->elem->params[i], "");
        }
        return spell_decl(t->elem->elem, "") + " (*" + name + ")(" + params + ")";
      }
      return spell_decl(t->elem, "*" + name);
    default: {
      std::string base = t->show();
      if (name.empty()) return base;
      return base + " " + name;
    }
  }
}

struct Emitter {
  std::ostringstream out;
  int indent = 0;

  void line_start() {
    for (int i = 0; i < indent; ++i) out << "    ";
  }

  // Emit one statement; `inline_ctx` means the statement must stay on the
  // current line (conjunct position).
  std::string stmt_inline(const Stmt& s);
  void stmt_block(const Stmt& s);  // chop-aware, multi-line
};

std::string Emitter::stmt_inline(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Empty: return "empty";
    case StmtKind::Skip: return "skip";
    case StmtKind::More: return "more";
    case StmtKind::Decl: {
      std::string d = spell_decl(s.decl_type, s.name);
      if (s.rhs) d += " <== " + emit_e(*s.rhs);
      if (!s.init_list.empty()) {
        d += " <== {";
        for (size_t i = 0; i < s.init_list.size(); ++i) {
          if (i) d += ", ";
          d += emit_e(*s.init_list[i]);
        }
        d += "}";
      }
      return d;
    }
    case StmtKind::PresentAssign:
      return emit_e(*s.lhs) + " <== " + emit_e(*s.rhs);
    case StmtKind::UnitAssign:
      return emit_e(*s.lhs) + " := " + emit_e(*s.rhs);
    case StmtKind::And: {
      std::string r;
      for (size_t i = 0; i < s.kids.size(); ++i) {
        if (i) r += " and ";
        const Stmt& k = *s.kids[i];
        if (k.kind == StmtKind::Chop || k.kind == StmtKind::And)
          r += "(" + stmt_inline(k) + ")";
        else
          r += stmt_inline(k);
      }
      return r;
    }
    case StmtKind::Chop: {
      std::string r;
      for (size_t i = 0; i < s.kids.size(); ++i) {
        if (i) r += "; ";
        r += stmt_inline(*s.kids[i]);
      }
      return r;
    }
    case StmtKind::Call: {
      std::string r = s.name + "(";
      for (size_t i = 0; i < s.args.size(); ++i) {
        if (i) r += ", ";
        r += emit_e(*s.args[i]);
      }
      return r + ")";
    }
    case StmtKind::ExtCallStmt: {
      std::string r = "ext " + s.name + "(";
      for (size_t i = 0; i < s.args.size(); ++i) {
        if (i) r += ", ";
        r += emit_e(*s.args[i]);
      }
      return r + ")";
    }
    default: {
      // Structured statement in conjunct position: render block-style into
      // a sub-emitter and fold (rare; translator avoids it).
      Emitter sub;
      sub.indent = indent;
      sub.stmt_block(s);
      return sub.out.str();
    }
  }
}

void Emitter::stmt_block(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Chop: {
      for (size_t i = 0; i < s.kids.size(); ++i) {
        stmt_block(*s.kids[i]);
        if (i + 1 < s.kids.size()) out << ";\n";
      }
      return;
    }
    case StmtKind::If: {
      line_start();
      out << "if (" << emit_e(*s.cond) << ") then {\n";
      ++indent;
      stmt_block(*s.kids[0]);
      out << "\n";
      --indent;
      line_start();
      out << "} else {\n";
      ++indent;
      stmt_block(*s.kids[1]);
      out << "\n";
      --indent;
      line_start();
      out << "}";
      return;
    }
    case StmtKind::While: {
      line_start();
      out << "while (" << emit_e(*s.cond) << ") {\n";
      ++indent;
      stmt_block(*s.kids[0]);
      out << "\n";
      --indent;
      line_start();
      out << "}";
      return;
    }
    case StmtKind::Next: {
      line_start();
      out << "next {\n";
      ++indent;
      stmt_block(*s.kids[0]);
      out << "\n";
      --indent;
      line_start();
      out << "}";
      return;
    }
    case StmtKind::Alw: {
      line_start();
      out << "alw {\n";
      ++indent;
      stmt_block(*s.kids[0]);
      out << "\n";
      --indent;
      line_start();
      out << "}";
      return;
    }
    default:
      line_start();
      out << stmt_inline(s);
      return;
  }
}

}  // namespace

std::string emit_expr(const ExprPtr& e) { return e ? emit_e(*e) : ""; }

std::string emit(const StmtPtr& s, const EmitOptions&) {
  if (!s) return "";
  Emitter em;
  em.stmt_block(*s);
  return em.out.str();
}

std::string emit(const Program& p, const EmitOptions& opt) {
  std::ostringstream out;
  for (const auto& sd : p.structs) {
    out << "struct " << sd.name << " {\n";
    for (size_t i = 0; i < sd.fields.size(); ++i) {
      out << "    " << spell_decl(sd.fields[i].second, sd.fields[i].first);
      if (i + 1 < sd.fields.size()) out << " and";
      out << "\n";
    }
    out << "};\n\n";
  }
  for (const auto& f : p.funcs) {
    out << "function " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) out << ", ";
      out << spell_decl(f.params[i].second, f.params[i].first);
    }
    out << ") {\n";
    Emitter em;
    em.indent = 1;
    if (f.body) em.stmt_block(*f.body);
    out << em.out.str() << "\n};\n\n";
  }
  bool first = true;
  for (const auto& g : p.globals) {
    if (!first) out << ";\n";
    first = false;
    out << emit(g, opt);
  }
  if (p.body) {
    if (!first) out << ";\n";
    out << emit(p.body, opt);
  }
  out << "\n";
  return out.str();
}

}  // namespace c2m::msvl
