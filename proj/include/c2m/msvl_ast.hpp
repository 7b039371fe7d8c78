#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c2m/diag.hpp"
#include "c2m/value.hpp"
#include "c2m/xdc_ast.hpp"  // reuse TypePtr for variable types

namespace c2m::msvl {

using xdc::TypePtr;

// ---------------------------------------------------------------------------
// Expressions (arithmetic terms and boolean conditions share one node type;
// the evaluator interprets relational/logical operators as producing 0/1 and
// any term in boolean position as "value != 0").
// ---------------------------------------------------------------------------

enum class ExprKind {
  IntLit, FloatLit, CharLit,
  True, False,
  Var,
  Index,    // la[ra]          kids: base, index
  Field,    // la.name         kids: base
  Deref,    // *ra             kids: operand
  AddrOf,   // &la             kids: operand
  Unary,    // -, !, ~
  Binary,   // aop, relational, and/or
  CondExpr, // if (b) then ra1 else ra2   kids: b, ra1, ra2
  Prev,     // prev(ra)        kids: operand
  ExtCall,  // ext f(ra...)    value position: R10 (defined f) / R11 (extern)
  Cast,     // (τ) ra          kids: operand, target type in cast_type
  Arrow,    // ra->name        kids: base
};

enum class UnOp { Neg, Not, BitNot };
enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Shl, Shr, BitAnd, BitOr, BitXor,
  Lt, Gt, Le, Ge, Eq, Ne,   // Eq emits "=", Ne emits "!="
  And, Or,                  // boolean connectives
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  ExprKind kind;
  int64_t int_val = 0;
  double float_val = 0;
  std::string name;  // Var, Field/Arrow member, ExtCall callee
  UnOp un_op{};
  BinOp bin_op{};
  TypePtr cast_type;  // Cast target
  std::vector<ExprPtr> kids;
  // Interpreter-internal: a pre-evaluated constant (unit assignments evaluate
  // their right side in the current state and carry the value to the next).
  std::shared_ptr<Value> resolved;
};

ExprPtr make_expr(ExprKind k);
ExprPtr var(const std::string& n);
ExprPtr int_lit(int64_t n);
ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
  Empty, Skip, More,
  Decl,          // τ x [<== ra] — declaration conjunct
  PresentAssign, // la <== ra
  UnitAssign,    // la := ra
  And,           // conjunction of statements
  Chop,          // sequential composition
  Next,          // next { ms }
  Alw,           // alw { ms }
  If,            // if (b) then { ms1 } else { ms2 }
  While,         // while (b) { ms }
  Call,          // f(ra...)        internal function call
  ExtCallStmt,   // ext f(ra...)    external-style call statement
};

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct Stmt {
  StmtKind kind;
  // Decl
  TypePtr decl_type;
  std::string name;          // Decl var name, Call/ExtCallStmt callee
  ExprPtr lhs;               // PresentAssign/UnitAssign target
  ExprPtr rhs;               // assignment source / Decl initializer
  std::vector<ExprPtr> init_list;  // Decl aggregate initializer
  ExprPtr cond;              // If / While
  std::vector<StmtPtr> kids; // And/Chop members; Next/Alw body; If: [then,else]; While: [body]
  std::vector<ExprPtr> args; // Call/ExtCallStmt
  // Interpreter-internal:
  bool armed = false;          // Next/Alw already reduced at the current state
  bool state_residue = false;  // a state conjunct was discharged alongside
  std::string resolved_path;   // PresentAssign with a pre-resolved target
  TypePtr resolved_type;
};

StmtPtr make_stmt(StmtKind k);
StmtPtr chop2(StmtPtr a, StmtPtr b);   // flattening chop constructor
StmtPtr and2(StmtPtr a, StmtPtr b);    // flattening conjunction constructor

// ---------------------------------------------------------------------------
// Program
// ---------------------------------------------------------------------------

struct StructDef {
  std::string name;
  std::vector<std::pair<std::string, TypePtr>> fields;
};

struct Func {
  std::string name;
  std::vector<std::pair<std::string, TypePtr>> params;
  StmtPtr body;
};

struct Program {
  std::vector<StructDef> structs;
  std::vector<StmtPtr> globals;  // global declaration statements, chopped in order
  std::vector<Func> funcs;
  StmtPtr body;                  // top-level statement
  const Func* find_func(const std::string& n) const;
  const StructDef* find_struct(const std::string& n) const;
};

// Node counts (statement + expression nodes), for the growth bound.
int count_nodes(const Program& p);
int count_nodes(const Stmt& s);
int count_nodes(const Expr& e);

// ---------------------------------------------------------------------------
// Emission and parsing
// ---------------------------------------------------------------------------

struct EmitOptions {
  bool canonical = true;  // byte-stable canonical layout
};

std::string emit(const Program& p, const EmitOptions& opt = {});
std::string emit(const StmtPtr& s, const EmitOptions& opt = {});
std::string emit_expr(const ExprPtr& e);

// Parse the textual form back. Returns nullopt on error (reported to sink).
std::optional<Program> parse_msvl(const std::string& src,
                                  const std::string& file,
                                  DiagnosticSink& sink);

}  // namespace c2m::msvl
