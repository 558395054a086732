#pragma once

#include "minerl/ast.hpp"
#include "minerl/subtype.hpp"

namespace minerl {

// Variable environment; monotypes are schemes with no quantifier.
struct TypeEnv {
  std::map<Symbol, TypeScheme> binds;

  const TypeScheme* lookup(Symbol name) const {
    auto it = binds.find(name);
    return it == binds.end() ? nullptr : &it->second;
  }
  void bind(Symbol name, TypeScheme s) { binds[name] = std::move(s); }
  void bind_mono(Symbol name, TypeRef t) { binds[name] = TypeScheme{{}, t}; }
  bool empty() const { return binds.empty(); }
};

// Γ,Γ' — bindings of the right side take precedence.
TypeEnv env_concat(const TypeEnv& base, const TypeEnv& update);

// Pointwise intersection; a name bound on one side only keeps its type.
// Both sides must bind monotypes.
TypeEnv env_intersect(TypeStore& store, const TypeEnv& a, const TypeEnv& b);

std::vector<TyVar> env_free_tyvars(TypeStore& store, const TypeEnv& env);

// Environment contributed by a guard: `is b x` binds {x : b}.
TypeEnv guard_env(TypeStore& store, const GuardPtr& g);

// Environment for the variables of p when matched against type t. Pair
// patterns project t ∧ pair; empty scrutinees give the components none.
TypeEnv pat_env(SubtypeCtx& ctx, TypeRef t, const PatternPtr& p);
TypeEnv gpat_env(SubtypeCtx& ctx, TypeRef t, const GuardedPattern& pg);

// Type of a pattern under an environment for its variables.
TypeRef pat_type(TypeStore& store, const PatternPtr& p, const TypeEnv& env);

// View of an expression as a pattern: variables and pairs survive,
// everything else becomes a wildcard.
PatternPtr pat_of_expr(const ExprPtr& e);

// Potential type: scrutinees matching pg must have this type.
TypeRef potential_type(TypeStore& store, const GuardedPattern& pg, const ExprPtr& e);

// Accepting type: scrutinees of this type are guaranteed to match. Oracles,
// guard subjects bound nowhere, duplicate pattern variables (whose match can
// fail on component inequality) and float constants (equality tests with no
// singleton type) all degrade it to the empty type.
TypeRef accepting_type(TypeStore& store, const GuardedPattern& pg, const ExprPtr& e);

}  // namespace minerl
