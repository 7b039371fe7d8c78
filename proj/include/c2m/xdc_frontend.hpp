#pragma once

#include <optional>
#include <string>

#include "c2m/diag.hpp"
#include "c2m/xdc_ast.hpp"

namespace c2m::xdc {

// Parse a translation unit. The parser accepts a superset of the restricted
// language (goto, comma expressions, compound assignment, ...) so that
// check_subset can report precise item codes. Returns nullopt on syntax
// errors (reported to the sink).
std::optional<Program> parse_program(const std::string& src,
                                     const std::string& file,
                                     DiagnosticSink& sink);

// Type-check the program in place (annotates Expr::type). Strict typing: no
// implicit arithmetic promotions; binary operands must have identical type
// (except pointer±integer); assignment converts per the store rules.
bool typecheck(Program& p, DiagnosticSink& sink);

// Report every use of a construct outside the restricted subset, with the
// item code (1..14) of the exclusion list. Returns true when clean.
bool check_subset(const Program& p, DiagnosticSink& sink);

// Convenience: parse + subset-check + typecheck.
std::optional<Program> analyze(const std::string& src, const std::string& file,
                               DiagnosticSink& sink);

}  // namespace c2m::xdc
