#pragma once

#include "minerl/constraints.hpp"
#include "minerl/module.hpp"

namespace minerl {

enum class Severity : uint8_t { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string file;
  uint32_t line = 0;
  uint32_t col = 0;
  std::string message;
};

struct CheckOptions {
  RewriteOptions rewrite;

  CheckOptions() {
    // The checker runs with a larger search budget than the solver's
    // conservative default; whole definitions are in scope here.
    rewrite.tally.max_alternatives = 500000;
  }
};

struct CheckResult {
  std::vector<Diagnostic> diagnostics;
  bool ok() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) return false;
    return true;
  }
};

// Validates a whole module: annotated definitions against every member of
// their intersection, unannotated ones through inferred monotypes, plus the
// final main expression. Never aborts on type errors.
CheckResult check_module(SubtypeCtx& ctx, const Module& m,
                         const CheckOptions& opts = {});

// Branch input types per case and per intersection member, as computed by
// the accepted derivation of one definition.
struct CaseReport {
  Span span;
  std::vector<TypeRef> input_types;
  TypeRef output_type = 0;
};

struct MemberReport {
  TypeRef member = 0;              // the arrow checked (0 for unannotated defs)
  std::vector<CaseReport> cases;   // source order
  bool accepted = false;
};

struct DefReport {
  std::vector<MemberReport> members;
};

struct BranchReportError {
  std::string message;
};

// Re-checks one definition and returns the branch data; fails when the name
// is unknown.
std::optional<DefReport> branch_report(SubtypeCtx& ctx, const Module& m,
                                       Symbol def_name,
                                       const CheckOptions& opts = {});

}  // namespace minerl
