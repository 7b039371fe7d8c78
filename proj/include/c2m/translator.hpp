#pragma once

#include <optional>
#include <string>

#include "c2m/diag.hpp"
#include "c2m/msvl_ast.hpp"
#include "c2m/xdc_ast.hpp"

namespace c2m {

// Source-to-source translation of a checked program into an executable
// temporal-logic program. Structure-directed: declarations, expressions and
// statements are mapped compositionally; control transfers (break / continue /
// return) become boolean flag variables consulted by guards that the
// sequencing translation inserts; switch becomes a guarded if-chain over a
// `switch` fall-through flag. Functions gain a trailing RVal parameter when
// they return a value.
class Translator {
 public:
  explicit Translator(const xdc::Program& prog) : prog_(prog) {}

  // Whole-program translation. Requires a typechecked, subset-clean program.
  std::optional<msvl::Program> prgm_tr(DiagnosticSink& sink);

  // Exposed sub-translations (used directly by tests).
  msvl::StmtPtr dec_tr(const xdc::VarDecl& d);
  msvl::ExprPtr ex_tr(const xdc::ExprPtr& e);
  msvl::ExprPtr vl_tr(const xdc::ExprPtr& le);
  msvl::StmtPtr stmt_tr(const xdc::StmtPtr& s);
  msvl::StmtPtr chop_tr(const xdc::StmtPtr& first, msvl::StmtPtr rest_tr,
                        const std::vector<xdc::StmtPtr>& rest);
  msvl::StmtPtr seq_tr(const std::vector<xdc::StmtPtr>& stmts);
  msvl::StmtPtr switch_tr(const xdc::Stmt& sw);
  msvl::StmtPtr while_tr(const xdc::Stmt& s);
  msvl::StmtPtr do_tr(const xdc::Stmt& s);
  msvl::StmtPtr for_tr(const xdc::Stmt& s);
  std::optional<msvl::Func> func_tr(const xdc::FuncDef& f, DiagnosticSink& sink);

  // Identifier mapping: identity, except names colliding with target-language
  // keywords get a "_v" suffix.
  std::string map_name(const std::string& n) const;

 private:
  const xdc::Program& prog_;
  msvl::TypePtr map_type(const xdc::TypePtr& t) const;
  bool is_extern_func(const std::string& n) const;
  bool returns_value(const std::string& n) const;
};

// The identifier mapping used by the translator, as a free function (the
// differential checker applies it to snapshot paths).
std::string mapped_name(const std::string& n);

// Convenience: full pipeline source→source. Returns emitted text.
std::optional<std::string> translate_source(const std::string& c_src,
                                            const std::string& file,
                                            DiagnosticSink& sink,
                                            bool canonical = true);

}  // namespace c2m
