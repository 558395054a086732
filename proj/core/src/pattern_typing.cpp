#include "minerl/pattern_typing.hpp"

#include <cassert>

namespace minerl {

TypeEnv env_concat(const TypeEnv& base, const TypeEnv& update) {
  TypeEnv out = base;
  for (const auto& [name, scheme] : update.binds) out.binds[name] = scheme;
  return out;
}

TypeEnv env_intersect(TypeStore& store, const TypeEnv& a, const TypeEnv& b) {
  TypeEnv out = a;
  for (const auto& [name, scheme] : b.binds) {
    auto it = out.binds.find(name);
    if (it == out.binds.end()) {
      out.binds.emplace(name, scheme);
    } else {
      assert(it->second.is_mono() && scheme.is_mono());
      it->second = TypeScheme{{}, store.intersect(it->second.body, scheme.body)};
    }
  }
  return out;
}

std::vector<TyVar> env_free_tyvars(TypeStore& store, const TypeEnv& env) {
  std::set<TyVar> vars;
  for (const auto& [name, scheme] : env.binds) {
    for (TyVar v : free_tyvars(store, scheme)) vars.insert(v);
  }
  return {vars.begin(), vars.end()};
}

TypeEnv guard_env(TypeStore& store, const GuardPtr& g) {
  switch (g->kind) {
    case GuardKind::True:
    case GuardKind::Oracle:
      return {};
    case GuardKind::Is: {
      TypeEnv env;
      assert(g->subject->kind == ExprKind::Var && "source guards test variables");
      env.bind_mono(g->subject->var, store.base(g->base));
      return env;
    }
    case GuardKind::And:
      return env_intersect(store, guard_env(store, g->lhs), guard_env(store, g->rhs));
  }
  return {};
}

TypeEnv pat_env(SubtypeCtx& ctx, TypeRef t, const PatternPtr& p) {
  TypeStore& store = ctx.store();
  switch (p->kind) {
    case PatternKind::Const:
    case PatternKind::Wild:
      return {};
    case PatternKind::Var: {
      TypeEnv env;
      env.bind_mono(p->var, t);
      return env;
    }
    case PatternKind::Pair: {
      TypeRef tp = store.intersect(t, store.any_pair());
      auto l = ctx.proj_left(tp);
      auto r = ctx.proj_right(tp);
      assert(l && r);
      return env_intersect(store, pat_env(ctx, *l, p->left),
                           pat_env(ctx, *r, p->right));
    }
  }
  return {};
}

TypeEnv gpat_env(SubtypeCtx& ctx, TypeRef t, const GuardedPattern& pg) {
  return env_intersect(ctx.store(), pat_env(ctx, t, pg.pattern),
                       guard_env(ctx.store(), pg.guard));
}

TypeRef pat_type(TypeStore& store, const PatternPtr& p, const TypeEnv& env) {
  switch (p->kind) {
    case PatternKind::Const:
      return store.base(type_of_constant(p->constant));
    case PatternKind::Wild:
      return store.top();
    case PatternKind::Var: {
      const TypeScheme* s = env.lookup(p->var);
      return s ? s->body : store.top();
    }
    case PatternKind::Pair:
      return store.product(pat_type(store, p->left, env),
                           pat_type(store, p->right, env));
  }
  return store.top();
}

PatternPtr pat_of_expr(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Var:
      return Pattern::make_var(e->var, e->span);
    case ExprKind::Pair:
      return Pattern::make_pair(pat_of_expr(e->child1), pat_of_expr(e->child2),
                                e->span);
    default:
      return Pattern::make_wild(e->span);
  }
}

TypeRef potential_type(TypeStore& store, const GuardedPattern& pg, const ExprPtr& e) {
  TypeEnv genv = guard_env(store, pg.guard);
  return store.intersect(pat_type(store, pg.pattern, genv),
                         pat_type(store, pat_of_expr(e), genv));
}

TypeRef accepting_type(TypeStore& store, const GuardedPattern& pg, const ExprPtr& e) {
  if (guard_has_oracle(pg.guard)) return store.bottom();
  if (pattern_is_nonlinear(pg.pattern)) return store.bottom();
  // A float constant matches by equality but its pattern type is all of
  // float; no scrutinee type can guarantee the match.
  if (pattern_has_float_constant(pg.pattern)) return store.bottom();
  std::set<Symbol> bound = bound_vars(pg.pattern);
  for (Symbol b : bound_vars(pat_of_expr(e))) bound.insert(b);
  for (Symbol v : guard_vars(pg.guard)) {
    if (!bound.count(v)) return store.bottom();
  }
  return potential_type(store, pg, e);
}

}  // namespace minerl
