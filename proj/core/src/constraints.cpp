#include "minerl/constraints.hpp"

#include <algorithm>
#include <cassert>

namespace minerl {

ConstraintPtr Constraint::sub(TypeRef lower, TypeRef upper, Span s, bool exh) {
  auto c = std::make_shared<Constraint>();
  c->kind = ConstraintKind::Sub;
  c->lower = lower;
  c->upper = upper;
  c->span = s;
  c->exhaustiveness = exh;
  return c;
}

ConstraintPtr Constraint::var_sub(Symbol var, TypeRef upper, Span s) {
  auto c = std::make_shared<Constraint>();
  c->kind = ConstraintKind::VarSub;
  c->var = var;
  c->upper = upper;
  c->span = s;
  return c;
}

ConstraintPtr Constraint::def(TypeEnv env, ConstraintSet body, Span s) {
  auto c = std::make_shared<Constraint>();
  c->kind = ConstraintKind::Def;
  c->env = std::move(env);
  c->body = std::move(body);
  c->span = s;
  return c;
}

PatEnvResult pat_env_constr(TypeStore& store, FreshSource& fresh, TypeRef t,
                            const PatternPtr& p) {
  PatEnvResult res;
  switch (p->kind) {
    case PatternKind::Const:
    case PatternKind::Wild:
      return res;
    case PatternKind::Var:
      res.env.bind_mono(p->var, t);
      return res;
    case PatternKind::Pair: {
      TypeRef a1 = fresh.fresh_ref("p");
      TypeRef a2 = fresh.fresh_ref("p");
      PatEnvResult l = pat_env_constr(store, fresh, a1, p->left);
      PatEnvResult r = pat_env_constr(store, fresh, a2, p->right);
      res.constraints.push_back(Constraint::sub(t, store.product(a1, a2), p->span));
      for (auto& c : l.constraints) res.constraints.push_back(c);
      for (auto& c : r.constraints) res.constraints.push_back(c);
      res.env = env_intersect(store, l.env, r.env);
      return res;
    }
  }
  return res;
}

PatEnvResult pat_env_constr(TypeStore& store, FreshSource& fresh, TypeRef t,
                            const GuardedPattern& pg) {
  PatEnvResult res = pat_env_constr(store, fresh, t, pg.pattern);
  res.env = env_intersect(store, res.env, guard_env(store, pg.guard));
  return res;
}

ConstraintSet gen_expr(TypeStore& store, FreshSource& fresh, const ExprPtr& e,
                       TypeRef target) {
  ConstraintSet out;
  switch (e->kind) {
    case ExprKind::Var:
      out.push_back(Constraint::var_sub(e->var, target, e->span));
      return out;
    case ExprKind::Const:
      out.push_back(Constraint::sub(store.constant(e->constant), target, e->span));
      return out;
    case ExprKind::Abs: {
      // Checking directly against an arrow keeps curried parameters at their
      // declared types; the general form goes through fresh variables.
      const TypeNode& tn = store.node(target);
      if (tn.kind == TypeKind::Arrow) {
        TypeEnv env;
        env.bind_mono(e->var, tn.kids[0]);
        ConstraintSet body = gen_expr(store, fresh, e->child1, tn.kids[1]);
        out.push_back(Constraint::def(std::move(env), std::move(body), e->span));
        return out;
      }
      TypeRef alpha = fresh.fresh_ref("d");
      TypeRef beta = fresh.fresh_ref("c");
      ConstraintSet body = gen_expr(store, fresh, e->child1, beta);
      TypeEnv env;
      env.bind_mono(e->var, alpha);
      out.push_back(Constraint::def(std::move(env), std::move(body), e->span));
      out.push_back(Constraint::sub(store.arrow(alpha, beta), target, e->span));
      return out;
    }
    case ExprKind::App: {
      TypeRef alpha = fresh.fresh_ref("a");
      TypeRef beta = fresh.fresh_ref("r");
      ConstraintSet fn = gen_expr(store, fresh, e->child1, store.arrow(alpha, beta));
      ConstraintSet arg = gen_expr(store, fresh, e->child2, alpha);
      out.insert(out.end(), fn.begin(), fn.end());
      out.insert(out.end(), arg.begin(), arg.end());
      out.push_back(Constraint::sub(beta, target, e->span));
      return out;
    }
    case ExprKind::Pair: {
      TypeRef a1 = fresh.fresh_ref("l");
      TypeRef a2 = fresh.fresh_ref("r");
      ConstraintSet l = gen_expr(store, fresh, e->child1, a1);
      ConstraintSet r = gen_expr(store, fresh, e->child2, a2);
      out.insert(out.end(), l.begin(), l.end());
      out.insert(out.end(), r.begin(), r.end());
      out.push_back(Constraint::sub(store.product(a1, a2), target, e->span));
      return out;
    }
    case ExprKind::Case: {
      TypeRef alpha = fresh.fresh_ref("s");
      TypeRef beta = fresh.fresh_ref("o");
      auto c = std::make_shared<Constraint>();
      c->kind = ConstraintKind::Case;
      c->span = e->span;
      c->case_expr = e.get();
      c->output_var = beta;
      c->scrutinee = gen_expr(store, fresh, e->child1, alpha);

      // Accepting types drive the branch subtraction and the exhaustiveness
      // check; the potential type bounds each branch input from above.
      TypeRef seen = store.bottom();
      for (const Clause& cl : e->clauses) {
        const GuardedPattern& pg = cl.guarded_pattern;
        TypeRef input = store.intersect(store.diff(alpha, seen),
                                        potential_type(store, pg, e->child1));
        seen = store.unite(seen, accepting_type(store, pg, e->child1));

        PatEnvResult scr_env =
            pat_env_constr(store, fresh, input, pat_of_expr(e->child1));
        PatEnvResult env_pg = pat_env_constr(store, fresh, input, pg);
        for (auto& cc : scr_env.constraints) c->scrutinee.push_back(cc);
        for (auto& cc : env_pg.constraints) c->scrutinee.push_back(cc);

        CaseBranch br;
        br.env = env_intersect(store, scr_env.env, env_pg.env);
        br.body = gen_expr(store, fresh, cl.body, beta);
        br.input = input;
        br.span = pg.pattern->span.valid() ? pg.pattern->span : e->span;
        c->branches.push_back(std::move(br));
      }
      c->scrutinee.push_back(Constraint::sub(alpha, seen, e->span, true));
      out.push_back(std::move(c));
      out.push_back(Constraint::sub(beta, target, e->span));
      return out;
    }
    case ExprKind::Letrec: {
      auto c = std::make_shared<Constraint>();
      c->kind = ConstraintKind::Let;
      c->span = e->span;
      for (const Definition& d : e->defs) {
        GenDefResult g = gen_def(store, fresh, d);
        for (auto& cc : g.constraints) c->body.push_back(cc);
        c->env = env_concat(c->env, g.env);
      }
      c->let_body = gen_expr(store, fresh, e->child1, target);
      out.push_back(std::move(c));
      return out;
    }
  }
  return out;
}

GenDefResult gen_def(TypeStore& store, FreshSource& fresh, const Definition& d) {
  GenDefResult res;
  if (!d.annotation) {
    TypeRef alpha = fresh.fresh_ref(symbol_name(d.name));
    res.constraints = gen_expr(store, fresh, d.rhs, alpha);
    res.env.bind_mono(d.name, alpha);
    return res;
  }
  const AnnotatedScheme& ann = *d.annotation;
  assert(d.rhs->kind == ExprKind::Abs);
  for (TypeRef member : ann.members) {
    const TypeNode& m = store.node(member);
    assert(m.kind == TypeKind::Arrow);
    TypeEnv env;
    env.bind_mono(d.rhs->var, m.kids[0]);
    ConstraintSet body = gen_expr(store, fresh, d.rhs->child1, m.kids[1]);
    res.constraints.push_back(Constraint::def(std::move(env), std::move(body), d.span));
  }
  res.env.bind(d.name, TypeScheme{ann.quantified, ann.body});
  return res;
}

TypeEnv generalize(TypeStore& store, const TypeEnv& outer, const TypeEnv& defs) {
  std::set<TyVar> pinned;
  for (TyVar v : env_free_tyvars(store, outer)) pinned.insert(v);
  TypeEnv out;
  for (const auto& [name, scheme] : defs.binds) {
    if (!scheme.is_mono()) {
      out.bind(name, scheme);
      continue;
    }
    std::vector<TyVar> quant;
    for (TyVar v : store.free_vars(scheme.body)) {
      if (!pinned.count(v)) quant.push_back(v);
    }
    out.bind(name, TypeScheme{std::move(quant), scheme.body});
  }
  return out;
}

SubtypeConstraintSet equiv_constraints(TypeStore& store, const TypeSubst& theta) {
  SubtypeConstraintSet out;
  for (const auto& [v, t] : theta) {
    TypeRef var = store.var(v);
    constraint_insert(out, {var, t});
    constraint_insert(out, {t, var});
  }
  return out;
}

TypeEnv env_apply_subst(TypeStore& store, const TypeEnv& env, const TypeSubst& theta) {
  TypeEnv out;
  for (const auto& [name, scheme] : env.binds) {
    // Quantified variables are globally fresh, never in theta's domain.
    out.bind(name, TypeScheme{scheme.quantified,
                              apply_subst(store, scheme.body, theta)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rewriting with backtracking over tally solutions.

namespace {

struct Piece {
  SubtypeConstraintSet constraints;
  std::vector<BranchRecord> records;
};

bool constraints_subset(const SubtypeConstraintSet& a, const SubtypeConstraintSet& b) {
  size_t i = 0;
  for (const SubtypeConstraint& x : a) {
    while (i < b.size() && b[i] < x) ++i;
    if (i >= b.size() || !(b[i] == x)) return false;
  }
  return true;
}

// Keeps the first occurrence among equal sets and drops strict supersets:
// a candidate asking strictly more than another one cannot succeed where
// the smaller one fails.
void prune_pieces(std::vector<Piece>& pieces) {
  std::vector<bool> dead(pieces.size(), false);
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (dead[i]) continue;
    for (size_t j = 0; j < pieces.size(); ++j) {
      if (i == j || dead[j]) continue;
      if (constraints_subset(pieces[j].constraints, pieces[i].constraints) &&
          (pieces[j].constraints.size() < pieces[i].constraints.size() || j < i)) {
        dead[i] = true;
        break;
      }
    }
  }
  std::vector<Piece> out;
  for (size_t i = 0; i < pieces.size(); ++i)
    if (!dead[i]) out.push_back(std::move(pieces[i]));
  pieces = std::move(out);
}

struct Rewriter {
  SubtypeCtx& ctx;
  TypeStore& store;
  const RewriteOptions& opts;
  std::vector<RewriteFailure> failures;

  void note_failure(Span span, std::string reason, bool exh) {
    if (failures.size() < 64) failures.push_back({span, std::move(reason), exh});
  }

  void check_cap(size_t n) {
    if (n > opts.max_candidates)
      throw ResourceLimitError("rewrite: candidate limit exceeded");
  }

  static Piece merge_pieces(const Piece& a, const Piece& b) {
    Piece merged;
    merged.constraints = constraint_union(a.constraints, b.constraints);
    merged.records = a.records;
    merged.records.insert(merged.records.end(), b.records.begin(), b.records.end());
    return merged;
  }

  std::vector<Piece> rw_set(const TypeEnv& env, const ConstraintSet& cs) {
    std::vector<Piece> pieces{Piece{}};
    for (const ConstraintPtr& c : cs) {
      std::vector<Piece> sub = rw_constraint(env, c);
      if (sub.empty()) return {};
      std::vector<Piece> next;
      for (const Piece& a : pieces) {
        for (const Piece& b : sub) {
          next.push_back(merge_pieces(a, b));
          check_cap(next.size());
        }
      }
      pieces = std::move(next);
      prune_pieces(pieces);
    }
    return pieces;
  }

  std::vector<Piece> rw_constraint(const TypeEnv& env, const ConstraintPtr& c) {
    switch (c->kind) {
      case ConstraintKind::Sub: {
        Piece p;
        constraint_insert(p.constraints, {c->lower, c->upper});
        return {std::move(p)};
      }
      case ConstraintKind::VarSub: {
        const TypeScheme* scheme = env.lookup(c->var);
        if (!scheme) {
          note_failure(c->span, "unbound variable '" + symbol_name(c->var) + "'",
                       false);
          return {};
        }
        TypeSubst inst;
        for (TyVar q : scheme->quantified)
          inst[q] = store.var(store.fresh_var(store.var_name(q) + "'"));
        TypeRef body = apply_subst(store, scheme->body, inst);
        Piece p;
        constraint_insert(p.constraints, {body, c->upper});
        return {std::move(p)};
      }
      case ConstraintKind::Def:
        return rw_set(env_concat(env, c->env), c->body);
      case ConstraintKind::Case:
        return rw_case(env, c);
      case ConstraintKind::Let:
        return rw_let(env, c);
    }
    return {};
  }

  std::set<TyVar> fixed_of(const TypeEnv& env) {
    std::set<TyVar> fixed;
    for (TyVar v : env_free_tyvars(store, env)) fixed.insert(v);
    return fixed;
  }

  std::vector<TypeSubst> solve(const TypeEnv& env, const SubtypeConstraintSet& d,
                               Span span, bool diagnose_exhaustiveness,
                               const ConstraintSet& marked) {
    std::vector<TypeSubst> thetas = tally(ctx, fixed_of(env), d, opts.tally);
    if (thetas.empty()) {
      bool named = false;
      if (diagnose_exhaustiveness) {
        // Point at the coverage constraint when dropping it helps.
        SubtypeConstraintSet relaxed;
        std::set<std::pair<TypeRef, TypeRef>> drop;
        for (const ConstraintPtr& m : marked) {
          if (m->kind == ConstraintKind::Sub && m->exhaustiveness)
            drop.insert({m->lower, m->upper});
        }
        for (const auto& sc : d) {
          if (!drop.count({sc.lower, sc.upper})) constraint_insert(relaxed, sc);
        }
        if (!drop.empty() &&
            !tally(ctx, fixed_of(env), relaxed, opts.tally).empty()) {
          note_failure(span, "case clauses do not cover the scrutinee type", true);
          named = true;
        }
      }
      if (!named) note_failure(span, "constraints are unsatisfiable here", false);
    }
    return thetas;
  }

  std::vector<Piece> rw_case(const TypeEnv& env, const ConstraintPtr& c) {
    std::vector<Piece> scrutinee = rw_set(env, c->scrutinee);
    std::vector<Piece> out;
    for (const Piece& sp : scrutinee) {
      std::vector<TypeSubst> thetas =
          solve(env, sp.constraints, c->span, true, c->scrutinee);
      for (const TypeSubst& theta : thetas) {
        BranchRecord record;
        record.case_expr = c->case_expr;
        record.span = c->span;
        record.output_var = c->output_var;

        bool dead_end = false;
        std::vector<Piece> combo{Piece{}};
        combo.front().constraints = equiv_constraints(store, theta);
        combo.front().records = sp.records;
        for (const CaseBranch& br : c->branches) {
          TypeRef input = apply_subst(store, br.input, theta);
          bool live = !ctx.is_empty(input);
          record.inputs.push_back(input);
          record.live.push_back(live);
          record.branch_spans.push_back(br.span);
          if (!live) continue;
          std::vector<Piece> body = rw_set(
              env_concat(env, env_apply_subst(store, br.env, theta)), br.body);
          if (body.empty()) {
            dead_end = true;
            break;
          }
          std::vector<Piece> next;
          for (const Piece& a : combo) {
            for (const Piece& b : body) {
              next.push_back(merge_pieces(a, b));
              check_cap(next.size());
            }
          }
          combo = std::move(next);
        }
        if (dead_end) continue;
        for (Piece& p : combo) {
          p.records.push_back(record);
          out.push_back(std::move(p));
          check_cap(out.size());
        }
      }
    }
    prune_pieces(out);
    return out;
  }

  std::vector<Piece> rw_let(const TypeEnv& env, const ConstraintPtr& c) {
    std::vector<Piece> defs = rw_set(env_concat(env, c->env), c->body);
    std::vector<Piece> out;
    for (const Piece& dp : defs) {
      std::vector<TypeSubst> thetas = solve(env, dp.constraints, c->span, false, {});
      for (const TypeSubst& theta : thetas) {
        TypeEnv outer = env_apply_subst(store, env, theta);
        TypeEnv bound = env_apply_subst(store, c->env, theta);
        TypeEnv gen = generalize(store, outer, bound);
        std::vector<Piece> body = rw_set(env_concat(env, gen), c->let_body);
        for (const Piece& b : body) {
          Piece merged;
          merged.constraints =
              constraint_union(equiv_constraints(store, theta), b.constraints);
          merged.records = dp.records;
          merged.records.insert(merged.records.end(), b.records.begin(),
                                b.records.end());
          out.push_back(std::move(merged));
          check_cap(out.size());
        }
      }
    }
    return out;
  }
};

}  // namespace

RewriteResult rewrite(SubtypeCtx& ctx, const TypeEnv& env, const ConstraintSet& cs,
                      const RewriteOptions& opts) {
  Rewriter rw{ctx, ctx.store(), opts};
  RewriteResult res;
  std::vector<Piece> pieces = rw.rw_set(env, cs);
  for (Piece& p : pieces) {
    RewriteCandidate cand;
    cand.constraints = std::move(p.constraints);
    cand.branch_records = std::move(p.records);
    res.candidates.push_back(std::move(cand));
  }
  res.failures = std::move(rw.failures);
  return res;
}

}  // namespace minerl
