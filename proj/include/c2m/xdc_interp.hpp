#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "c2m/externs.hpp"
#include "c2m/value.hpp"
#include "c2m/xdc_ast.hpp"

namespace c2m::xdc {

// ---------------------------------------------------------------------------
// Block-based memory: each variable lives in its own block of byte cells with
// [lo, hi) bounds. A pointer occupies four cells, each a fragment tagging the
// pointed-to block/offset, so reassembling a torn pointer fails loudly.
// ---------------------------------------------------------------------------

struct MemCell {
  enum class K { Undef, Byte, PtrFrag } k = K::Undef;
  uint8_t byte = 0;
  int32_t pb = 0;    // PtrFrag: pointee block
  int32_t poff = 0;  // PtrFrag: pointee offset
  uint8_t frag = 0;  // PtrFrag: fragment index 0..3
};

struct MemBlock {
  int32_t lo = 0, hi = 0;
  std::vector<MemCell> cells;  // size hi - lo
  bool is_func = false;        // function designator block
  std::string func_name;
  bool freed = false;
};

struct MemState {
  std::map<int32_t, MemBlock> blocks;
  int32_t next_block = 1;

  int32_t alloc(int32_t size);
  void free_block(int32_t b);
  bool valid(int32_t b, int32_t off, int32_t size) const;
  // Snapshot comparison for the purity side condition on expression calls.
  bool same_contents(const MemState& o) const;
};

// sizeof per the 32-bit model: char 1, short 2, int/long/float/pointer 4,
// double 8, packed structs/arrays.
int32_t size_of(const TypePtr& t, const Program& p);
int32_t field_offset(const StructDef& sd, const std::string& field,
                     const Program& p, TypePtr* field_type);

// Typed load/store through the access-mode table. Return false on error.
bool loadval(const TypePtr& t, const MemState& m, int32_t b, int32_t off,
             const Program& p, Value* out, std::string* err);
bool storeval(const TypePtr& t, MemState& m, int32_t b, int32_t off,
              const Program& p, const Value& v, std::string* err);

// ---------------------------------------------------------------------------
// Outcomes of statement execution
// ---------------------------------------------------------------------------

struct Outcome {
  enum class K { Normal, Continue, Break, Return, ReturnValue } k = K::Normal;
  Value v;
  static Outcome normal() { return {}; }
};

// ---------------------------------------------------------------------------
// Run verdicts
// ---------------------------------------------------------------------------

struct RunResult {
  enum class K { Exit, Timeout, RuntimeError } k = K::Exit;
  int64_t exit_code = 0;
  std::string error;
  // Final observable snapshot: globals plus main's locals (taken before the
  // exit deallocation), flattened to scalar paths like "a[2]" or "s.f".
  // Values paired with the block of the whole variable for injection building.
  struct Cell {
    std::string path;
    Value value;
    int32_t block;   // block of the owning variable
    int32_t offset;  // byte offset of this scalar within the block
  };
  std::vector<Cell> snapshot;
  std::vector<TraceEvent> trace;
  std::map<std::string, int64_t> rule_counts;  // semantic-rule coverage
  // Variable blocks of the observable frame (name -> block), plus function
  // designator blocks (name -> block), for building memory injections.
  std::map<std::string, int32_t> var_blocks;
  std::map<std::string, int32_t> func_blocks;
};

class Interpreter {
 public:
  Interpreter(const Program& prog, ExternEnv externs, int64_t fuel = 1000000);

  // Run the whole program: allocate globals, evaluate initializers, run main.
  RunResult run();

  // Pure expression evaluation against the current machine state (used by the
  // differential expression oracle and unit tests).
  bool eval_rvalue(const ExprPtr& e, Value* out, std::string* err);
  bool eval_lvalue(const ExprPtr& e, int32_t* b, int32_t* off, TypePtr* t,
                   std::string* err);

  // Test hooks: bind a variable to a fresh block with a given value.
  void bind_global(const std::string& name, const TypePtr& t, const Value& v);

  MemState& memory() { return mem_; }
  const std::map<std::string, int64_t>& rule_counts() const { return rules_; }

 private:
  struct Env {  // one call frame: name -> (block, type)
    std::map<std::string, std::pair<int32_t, TypePtr>> vars;
  };

  const Program& prog_;
  ExternEnv externs_;
  int64_t fuel_;
  int64_t fuel_left_;
  MemState mem_;
  Env globals_;
  std::vector<Env> frames_;
  std::map<std::string, int32_t> func_blocks_;  // function designators
  std::map<std::string, int64_t> rules_;
  std::string err_;
  bool timed_out_ = false;

  void count(const char* rule) { rules_[rule]++; }
  bool fail(const std::string& msg);
  bool lookup(const std::string& name, int32_t* b, TypePtr* t);

  bool exec_stmt(const StmtPtr& s, Outcome* out);
  bool exec_seq(const std::vector<StmtPtr>& body, Outcome* out);
  bool exec_switch(const Stmt& s, Outcome* out);
  bool call_function(const FuncDef& f, const std::vector<Value>& args,
                     Outcome* out, bool* is_extern_call);
  bool call_by_expr(const ExprPtr& call, Value* ret, bool want_value);
  bool eval_binop(BinOp op, const Value& a, const Value& b,
                  const TypePtr& ta, const TypePtr& tb, Value* out);
  bool cast_value(const Value& v, const TypePtr& from, const TypePtr& to,
                  Value* out, std::string* err);
  bool init_locals(const std::vector<VarDecl>& decls);
  bool store_init_list(const TypePtr& t, int32_t b,
                       const std::vector<ExprPtr>& inits);
  bool use_fuel();

  bool collect_snapshot(const Env& env, RunResult* rr);

  friend struct InterpTestPeer;
};

// Run convenience wrapper.
RunResult run_program(const Program& prog, ExternEnv externs,
                      int64_t fuel = 1000000);

}  // namespace c2m::xdc
