#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "c2m/externs.hpp"
#include "c2m/msvl_ast.hpp"
#include "c2m/value.hpp"

namespace c2m::msvl {

// ---------------------------------------------------------------------------
// States and intervals. A state has a left part (the variables that exist,
// each bound to a block of the location registry) and a right part (the
// values of scalar paths within those variables). Framing carries a value
// forward to the next state unless some conjunct assigns the variable there.
// ---------------------------------------------------------------------------

struct VarInfo {
  int32_t block = 0;
  TypePtr type;
};

struct State {
  std::map<std::string, VarInfo> frame;   // s^l: existing variables
  std::map<std::string, Value> vals;      // s^r: scalar path -> value
};

using Interval = std::vector<State>;

struct RunResult {
  enum class K { Terminated, Timeout, Infeasible, RuntimeError } k = K::Terminated;
  std::string error;
  Interval interval;            // σ · s_final when terminated
  int64_t exit_code = 0;        // RVal at the final state (0 when unset)
  std::vector<TraceEvent> trace;
  std::map<std::string, int64_t> rule_counts;
  struct Cell {
    std::string path;
    Value value;
    int32_t block;
    int32_t offset;
  };
  std::vector<Cell> snapshot;   // top-level frame at the final state
  std::map<std::string, int32_t> var_blocks;   // final-frame name -> block
  std::map<std::string, int32_t> func_blocks;  // function designators
};

class Interpreter {
 public:
  Interpreter(const Program& prog, ExternEnv externs, int64_t fuel = 1000000);

  RunResult run();

  // Expression evaluation against a manually prepared current state (test and
  // oracle hook). Declare variables first with bind_var.
  void bind_var(const std::string& name, const TypePtr& t, const Value& v);
  bool eval_right(const ExprPtr& e, Value* out, std::string* err);
  bool eval_bool(const ExprPtr& e, bool* out, std::string* err);

  const std::map<std::string, int64_t>& rule_counts() const { return rules_; }

 private:
  // Pending effects attached to the transition out of the current state.
  struct ExtAction {
    enum class K { Mfree, Extern, Splice } k;
    std::vector<std::string> free_names;        // Mfree
    std::string callee;                         // Extern
    std::vector<Value> args;                    // Extern (pre-evaluated)
    State splice;                               // Splice (EXT1): s'_n
  };

  // Normal form of a within-state reduction (the residual after the MIN
  // fixpoint): the conjuncts that survive into the transition decision.
  struct NF {
    bool is_false = false;
    bool empty = false;               // an explicit "empty" conjunct
    bool more = false;                // a "more" conjunct (next state exists)
    std::vector<StmtPtr> nexts;       // programs under a reduced "next"
    std::vector<StmtPtr> alws;        // bodies of "alw" to re-arm
    std::vector<ExtAction> exts;
  };

  // One execution context: the interval built so far plus the current state.
  struct Ctx {
    Interval sigma;       // s_0 .. s_{i-1}
    State cur;            // s_i under construction
    State prev;           // framing source for s_i
    bool has_prev = false;
    int depth = 0;
  };

  const Program& prog_;
  ExternEnv externs_;
  int64_t fuel_;
  int64_t fuel_left_ = 0;
  std::map<std::string, int64_t> rules_;
  int32_t next_block_ = 1;
  int32_t activation_ = 0;
  std::map<std::string, int32_t> func_blocks_;
  std::map<int32_t, std::string> block_owner_;   // block -> variable name
  std::map<int32_t, std::string> func_by_block_; // function blocks
  Ctx* ctx_ = nullptr;    // active context during run/eval
  Ctx test_ctx_;          // context used by bind_var/eval_right hooks
  std::string err_;
  bool undetermined_ = false;  // last eval failure: value not yet known

  void count(const char* rule) { rules_[rule]++; }
  bool fail(const std::string& msg);
  bool stall();  // mark the last failure as "value not determined yet"

  // --- evaluation (R/L/B rules) ---
  bool eval_r(const ExprPtr& e, Value* out);
  bool eval_l(const ExprPtr& e, int32_t* b, int32_t* off, TypePtr* t,
              std::string* path);
  bool eval_b(const ExprPtr& e, bool* out);
  bool eval_binop(BinOp op, const Value& a, const Value& b,
                  const TypePtr& ta, const TypePtr& tb, Value* out);
  bool path_for(int32_t b, int32_t off, std::string* path, TypePtr* t);
  bool read_cur(const std::string& path, Value* out);
  bool write_path(const std::string& path, const Value& v);
  bool declare(const std::string& name, const TypePtr& t);
  int32_t msize_of(const TypePtr& t) const;

  // --- reduction ---
  // Rewrites s within the current state; returns the residual statement
  // (nullptr on error / contradiction, with err_ set or nf->is_false).
  StmtPtr rewrite(const StmtPtr& s, NF* nf, bool* progressed);
  bool run_in_ctx(StmtPtr prog, Ctx& ctx, RunResult* rr);
  StmtPtr expand_call(const Func& f, const std::vector<ExprPtr>& args,
                      bool with_epilogue, std::string* rval_name);
  bool side_run(const StmtPtr& prog, Value* rval_out, State* final_state,
                const std::string& rval_name);
  const Func* resolve_callee(const std::string& name);
  bool frame_candidates(const std::set<std::string>& blocked, bool count_min2);
  std::set<std::string> assign_targets(const StmtPtr& s);

  bool is_defined_func(const std::string& n) const;
  friend struct MsvlTestPeer;
};

RunResult run_program(const Program& prog, ExternEnv externs,
                      int64_t fuel = 1000000);

}  // namespace c2m::msvl
