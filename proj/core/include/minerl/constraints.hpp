#pragma once

#include <memory>

#include "minerl/ast.hpp"
#include "minerl/pattern_typing.hpp"
#include "minerl/tally.hpp"

namespace minerl {

struct Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;
using ConstraintSet = std::vector<ConstraintPtr>;

struct CaseBranch {
  TypeEnv env;         // bindings for the branch body
  ConstraintSet body;  // body constraints at the case output variable
  TypeRef input = 0;   // refined scrutinee type for this branch
  Span span;
};

enum class ConstraintKind : uint8_t { Sub, VarSub, Def, Case, Let };

struct Constraint {
  ConstraintKind kind;
  TypeRef lower = 0, upper = 0;     // Sub
  Symbol var = 0;                   // VarSub: var <= upper
  TypeEnv env;                      // Def / Let
  ConstraintSet body;               // Def body / Let definitions
  ConstraintSet let_body;           // Let body
  ConstraintSet scrutinee;          // Case
  std::vector<CaseBranch> branches;  // Case
  TypeRef output_var = 0;           // Case: the variable all branch bodies meet
  const Expr* case_expr = nullptr;  // Case: source expression identity
  bool exhaustiveness = false;      // Sub emitted as the case coverage check
  Span span;

  static ConstraintPtr sub(TypeRef lower, TypeRef upper, Span s = {},
                           bool exhaustiveness = false);
  static ConstraintPtr var_sub(Symbol var, TypeRef upper, Span s = {});
  static ConstraintPtr def(TypeEnv env, ConstraintSet body, Span s = {});
};

// Monotonically increasing type-variable source; one per checker run.
class FreshSource {
 public:
  explicit FreshSource(TypeStore& store) : store_(store) {}
  TyVar fresh(const std::string& hint) { return store_.fresh_var(hint); }
  TypeRef fresh_ref(const std::string& hint) { return store_.var(fresh(hint)); }
  TypeStore& store() { return store_; }

 private:
  TypeStore& store_;
};

// Constraint generation (syntax directed); the expression is checked
// against the target type.
ConstraintSet gen_expr(TypeStore& store, FreshSource& fresh, const ExprPtr& e,
                       TypeRef target);

// Definition constraints plus the environment the definition contributes.
// Annotated definitions produce one Def constraint per arrow member.
struct GenDefResult {
  ConstraintSet constraints;
  TypeEnv env;
};
GenDefResult gen_def(TypeStore& store, FreshSource& fresh, const Definition& d);

// Environment for a guarded pattern scrutinizing type t; fresh variables
// for pair components are constrained in the returned set.
struct PatEnvResult {
  ConstraintSet constraints;
  TypeEnv env;
};
PatEnvResult pat_env_constr(TypeStore& store, FreshSource& fresh, TypeRef t,
                            const GuardedPattern& pg);
PatEnvResult pat_env_constr(TypeStore& store, FreshSource& fresh, TypeRef t,
                            const PatternPtr& p);

// Generalization: quantifies what the outer environment does not pin;
// already-polymorphic bindings pass through.
TypeEnv generalize(TypeStore& store, const TypeEnv& outer, const TypeEnv& defs);

// Equiv(theta): two-sided inclusions pinning the substitution.
SubtypeConstraintSet equiv_constraints(TypeStore& store, const TypeSubst& theta);

TypeEnv env_apply_subst(TypeStore& store, const TypeEnv& env, const TypeSubst& theta);

// --- Constraint rewriting ---------------------------------------------------

struct RewriteOptions {
  size_t max_candidates = 1000;
  TallyOptions tally;
};

// Computed branch data for one case under one substitution choice.
struct BranchRecord {
  const Expr* case_expr = nullptr;
  Span span;
  TypeRef output_var = 0;
  std::vector<TypeRef> inputs;  // per branch, substitution applied
  std::vector<bool> live;
  std::vector<Span> branch_spans;
};

struct RewriteCandidate {
  SubtypeConstraintSet constraints;
  std::vector<BranchRecord> branch_records;
};

struct RewriteFailure {
  Span span;
  std::string reason;
  bool exhaustiveness = false;
};

struct RewriteResult {
  std::vector<RewriteCandidate> candidates;  // deterministic exploration order
  std::vector<RewriteFailure> failures;
};

// Rewrites structured constraints to the candidate simple-constraint sets
// explored by the backtracking algorithm. The checker accepts when any
// candidate is tally-satisfiable.
RewriteResult rewrite(SubtypeCtx& ctx, const TypeEnv& env, const ConstraintSet& cs,
                      const RewriteOptions& opts = {});

}  // namespace minerl
