#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "c2m/diag.hpp"

namespace c2m::xdc {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind {
  Void,
  Char, UChar, Short, UShort, Int, UInt, Long, ULong,
  Float, Double,
  Pointer,   // elem
  Array,     // elem, size (size < 0 means "unsized", fixed up from init)
  Struct,    // struct_name
  Func,      // ret = elem, params
};

struct Type;
using TypePtr = std::shared_ptr<Type>;

struct Type {
  TypeKind kind = TypeKind::Int;
  TypePtr elem;                  // Pointer/Array elem, Func return type
  int array_size = -1;           // Array
  std::string struct_name;       // Struct
  std::vector<TypePtr> params;   // Func

  bool is_integer() const;
  bool is_arith() const;         // integer or floating
  bool is_scalar() const;        // arithmetic or pointer
  int int_width() const;         // 8/16/32 for integer kinds
  bool int_signed() const;
  std::string show() const;
};

TypePtr make_type(TypeKind k);
TypePtr make_ptr(TypePtr elem);
TypePtr make_array(TypePtr elem, int n);
TypePtr make_struct(const std::string& name);
bool type_equal(const TypePtr& a, const TypePtr& b);

struct StructField {
  std::string name;
  TypePtr type;
};
struct StructDef {
  std::string name;
  std::vector<StructField> fields;
  bool is_union = false;  // parsed for diagnosis; outside the subset
  Span span;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class UnOp { Neg, Not, BitNot, Deref, AddrOf, PreInc, PreDec };
enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Shl, Shr, BitAnd, BitOr, BitXor,
  Lt, Gt, Le, Ge, Eq, Ne,
  LogAnd, LogOr,
};

enum class ExprKind {
  IntLit, CharLit, FloatLit,
  Var,
  Unary, Binary, Cond,
  Index,      // a[i]
  Field,      // e.name
  Arrow,      // e->name  (sugar for (*e).name)
  Call,       // callee(args) — callee is Var (function or function pointer)
  // Superset nodes accepted by the parser so the subset checker can report
  // precise item codes instead of syntax errors:
  Assign,         // e1 = e2 used as an expression (chained / in condition)
  CompoundAssign, // e1 op= e2
  Comma,          // e1, e2
  PostIncDec,     // e++ / e-- (int_val = +1 / -1); statement position only
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  ExprKind kind;
  Span span;
  // literals
  int64_t int_val = 0;
  double float_val = 0.0;
  // Var / Field / Arrow member name
  std::string name;
  UnOp un_op{};
  BinOp bin_op{};
  std::vector<ExprPtr> kids;  // operands / args (Call: kids[0]=callee)
  // Filled by the typechecker:
  TypePtr type;
};

ExprPtr make_expr(ExprKind k, Span s);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
  Null,          // ;
  ExprAssign,    // le = e ;
  PostInc,       // le++ ;
  PostDec,       // le-- ;
  CallStmt,      // f(args) ;
  Block,         // { ... }
  If, While, DoWhile, For,
  Switch, Break, Continue, Return,
  // Superset nodes for subset diagnostics:
  Goto, Label, ExprStmt,  // ExprStmt: a bare superset expression statement
  Decl,          // local declaration statement (flagged when inside a block)
};

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct VarDecl {
  std::string name;
  TypePtr type;
  ExprPtr init;                    // scalar initializer, may be null
  std::vector<ExprPtr> init_list;  // array/struct brace initializer
  bool has_init_list = false;
  Span span;
  // Superset flags for the subset checker:
  bool storage_class = false;      // typedef/static/auto/register/extern
  std::string storage_kw;
  bool qualified = false;          // const/volatile
};

struct SwitchCase {
  bool is_default = false;
  int64_t label = 0;
  std::vector<StmtPtr> body;
  Span span;
};

struct Stmt {
  StmtKind kind;
  Span span;
  ExprPtr lhs;                 // ExprAssign/PostInc/PostDec target, If/While/... condition via `cond`
  ExprPtr expr;                // assignment RHS, Return value, CallStmt call expr, ExprStmt expr
  ExprPtr cond;                // If/While/DoWhile/For/Switch scrutinee
  std::vector<StmtPtr> body;   // Block body, loop body (single stmt wrapped)
  std::vector<StmtPtr> else_body;
  StmtPtr for_init;            // For: init statement (assign), may be null
  StmtPtr for_step;            // For: step statement, may be null
  std::vector<SwitchCase> cases;
  std::vector<VarDecl> decls;  // Decl
  std::string name;            // Goto/Label target
  bool cond_has_assign = false;
};

StmtPtr make_stmt(StmtKind k, Span s);

// ---------------------------------------------------------------------------
// Top level
// ---------------------------------------------------------------------------

struct FuncDef {
  std::string name;
  TypePtr ret;
  std::vector<VarDecl> params;
  bool is_varargs = false;
  bool is_extern = false;          // prototype only: external function
  std::vector<VarDecl> locals;     // declarations at function body head
  std::vector<StmtPtr> body;
  Span span;
};

struct Program {
  std::string file;
  std::vector<StructDef> structs;
  std::vector<VarDecl> globals;
  std::vector<FuncDef> funcs;      // includes extern prototypes and main
  const FuncDef* find_func(const std::string& n) const;
  const StructDef* find_struct(const std::string& n) const;
};

// Number of AST nodes (expressions + statements + declarations); the
// size metric used by the translation growth bound.
int count_nodes(const Program& p);
int count_nodes(const Expr& e);
int count_nodes(const Stmt& s);

}  // namespace c2m::xdc
