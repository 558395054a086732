#pragma once

#include <set>
#include <stdexcept>

#include "minerl/subtype.hpp"

namespace minerl {

struct SubtypeConstraint {
  TypeRef lower = 0;
  TypeRef upper = 0;
  bool operator==(const SubtypeConstraint& o) const {
    return lower == o.lower && upper == o.upper;
  }
  bool operator<(const SubtypeConstraint& o) const {
    return lower != o.lower ? lower < o.lower : upper < o.upper;
  }
};

// Finite, deduplicated set of simple constraints.
using SubtypeConstraintSet = std::vector<SubtypeConstraint>;

void constraint_insert(SubtypeConstraintSet& set, SubtypeConstraint c);
SubtypeConstraintSet constraint_union(const SubtypeConstraintSet& a,
                                      const SubtypeConstraintSet& b);

struct TallyOptions {
  size_t max_alternatives = 10000;
  // How many saturated constraint sets the backtracking search collects per
  // independent component.
  size_t max_solutions = 24;
  // Order the parametric (slack) solution before the pinned one; type
  // inference wants the general solution first, branch narrowing the tight
  // one.
  bool prefer_general = false;
};

struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Solves the constraint set, returning a deterministic list of substitutions
// whose domains avoid the fixed variables. Every returned substitution
// satisfies all constraints under is_subtype; unsatisfiable sets yield an
// empty list.
std::vector<TypeSubst> tally(SubtypeCtx& ctx, const std::set<TyVar>& fixed,
                             const SubtypeConstraintSet& constraints,
                             const TallyOptions& opts = {});

// Observation hook: called for every substitution tally returns, with the
// constraint set it solves. Used by the test suites to audit soundness.
using TallyAuditHook = void (*)(SubtypeCtx&, const SubtypeConstraintSet&,
                                const TypeSubst&);
void set_tally_audit_hook(TallyAuditHook hook);

}  // namespace minerl
