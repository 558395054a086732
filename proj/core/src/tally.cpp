#include "minerl/tally.hpp"

#include <algorithm>
#include <cassert>
#include <optional>

namespace minerl {

namespace {
TallyAuditHook g_audit_hook = nullptr;
}  // namespace

void set_tally_audit_hook(TallyAuditHook hook) { g_audit_hook = hook; }

void constraint_insert(SubtypeConstraintSet& set, SubtypeConstraint c) {
  auto it = std::lower_bound(set.begin(), set.end(), c);
  if (it == set.end() || !(*it == c)) set.insert(it, c);
}

SubtypeConstraintSet constraint_union(const SubtypeConstraintSet& a,
                                      const SubtypeConstraintSet& b) {
  SubtypeConstraintSet out = a;
  for (const auto& c : b) constraint_insert(out, c);
  return out;
}

namespace {

// Single-variable bound produced by normalization.
struct Bound {
  TyVar var = 0;
  bool is_upper = false;  // var <= bound; otherwise bound <= var
  TypeRef bound = 0;

  bool operator==(const Bound& o) const {
    return var == o.var && is_upper == o.is_upper && bound == o.bound;
  }
  bool operator<(const Bound& o) const {
    if (var != o.var) return var < o.var;
    if (is_upper != o.is_upper) return is_upper < o.is_upper;
    return bound < o.bound;
  }
};

using BoundSet = std::vector<Bound>;  // sorted, unique
// Disjunction of alternatives; empty means unsatisfiable, a single empty
// bound set means trivially satisfied.
using AltSet = std::vector<BoundSet>;

void canonize(BoundSet& b) {
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
}

bool bound_subset(const BoundSet& a, const BoundSet& b) {
  // a ⊆ b, both sorted
  size_t i = 0;
  for (const Bound& x : a) {
    while (i < b.size() && b[i] < x) ++i;
    if (i >= b.size() || !(b[i] == x)) return false;
  }
  return true;
}

void canonize(AltSet& a) {
  for (auto& b : a) canonize(b);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  // An alternative that asks strictly more than another one is redundant.
  std::vector<bool> dead(a.size(), false);
  for (size_t i = 0; i < a.size(); ++i) {
    if (dead[i]) continue;
    for (size_t j = 0; j < a.size(); ++j) {
      if (i == j || dead[j]) continue;
      if (bound_subset(a[j], a[i])) {
        dead[i] = true;
        break;
      }
    }
  }
  AltSet out;
  for (size_t i = 0; i < a.size(); ++i)
    if (!dead[i]) out.push_back(std::move(a[i]));
  a = std::move(out);
}

AltSet alt_true() { return {BoundSet{}}; }
AltSet alt_false() { return {}; }

struct Solver {
  SubtypeCtx& ctx;
  TypeStore& store;
  const std::set<TyVar>& fixed;
  const TallyOptions& opts;

  std::set<TypeRef> normalizing;  // types on the current normalization path
  std::map<TypeRef, AltSet> norm_cache;  // context-free results only

  void check_cap(size_t n) const {
    if (n > opts.max_alternatives)
      throw ResourceLimitError("tally: constraint alternatives exceeded " +
                               std::to_string(opts.max_alternatives));
  }

  AltSet alt_and(const AltSet& x, const AltSet& y) {
    AltSet out;
    for (const auto& bx : x) {
      for (const auto& by : y) {
        BoundSet merged = bx;
        merged.insert(merged.end(), by.begin(), by.end());
        canonize(merged);
        out.push_back(std::move(merged));
      }
    }
    canonize(out);
    check_cap(out.size());
    return out;
  }

  AltSet alt_or(AltSet x, const AltSet& y) {
    x.insert(x.end(), y.begin(), y.end());
    canonize(x);
    check_cap(x.size());
    return x;
  }

  // Alternatives that make t empty under all assignments of the fixed
  // variables.
  AltSet norm(TypeRef t) {
    if (normalizing.count(t)) return alt_true();
    bool cacheable = normalizing.empty();
    if (cacheable) {
      auto hit = norm_cache.find(t);
      if (hit != norm_cache.end()) return hit->second;
    }
    if (ctx.is_empty(t)) return alt_true();
    normalizing.insert(t);
    AltSet acc = alt_true();
    for (const DnfLine& line : store.dnf(t)) {
      acc = alt_and(acc, norm_line(line));
      if (acc.empty()) break;
    }
    normalizing.erase(t);
    if (cacheable) norm_cache.emplace(t, acc);
    return acc;
  }

  AltSet norm_line(const DnfLine& line) {
    LineParts p = split_line(store, line);
    if (p.vars_contradict()) return alt_true();

    // Smallest solvable top-level variable takes the rest of the line as its
    // bound; remaining variables stay inside the bound.
    std::optional<TyVar> pick;
    bool pick_positive = true;
    for (TyVar v : p.pos_vars) {
      if (!fixed.count(v) && (!pick || v < *pick)) {
        pick = v;
        pick_positive = true;
      }
    }
    for (TyVar v : p.neg_vars) {
      if (!fixed.count(v) && (!pick || v < *pick)) {
        pick = v;
        pick_positive = false;
      }
    }
    if (pick) {
      TypeRef var_atom = store.var(*pick);
      std::vector<TypeRef> rest;
      for (TypeRef a : line.pos)
        if (a != var_atom) rest.push_back(a);
      for (TypeRef a : line.neg)
        if (a != var_atom) rest.push_back(store.neg(a));
      TypeRef rest_ty = store.intersect(std::move(rest));
      Bound b;
      b.var = *pick;
      if (pick_positive) {
        b.is_upper = true;
        b.bound = store.neg(rest_ty);
      } else {
        b.is_upper = false;
        b.bound = rest_ty;
      }
      return AltSet{BoundSet{b}};
    }

    // Only fixed variables at top level: they are eliminated by polarity and
    // the constructor content must be empty on its own.
    for (World w : kScalarWorlds) {
      if (!scalar_world_empty(w, p)) return alt_false();
    }
    AltSet acc = alt_true();
    if (!p.pos_excludes_pairs()) {
      TypeRef s0 = store.top(), t0 = store.top();
      for (const auto& [s, t] : p.pos_prod) {
        s0 = store.intersect(s0, s);
        t0 = store.intersect(t0, t);
      }
      acc = alt_and(acc, norm_products(s0, t0, p.neg_prod, 0));
      if (acc.empty()) return acc;
    }
    if (!p.pos_excludes_funs() && !p.neg_any_fun) {
      AltSet arrows = alt_false();
      for (const auto& [nd, nc] : p.neg_arrow) {
        arrows = alt_or(arrows,
                        norm_arrow(nd, nc, p.pos_arrow, nd, store.top(), 0, false));
        if (!arrows.empty() && arrows.front().empty()) break;  // already trivially true
      }
      acc = alt_and(acc, arrows);
    }
    return acc;
  }

  AltSet norm_products(TypeRef s, TypeRef t,
                       const std::vector<std::pair<TypeRef, TypeRef>>& negs,
                       size_t i) {
    if (ctx.is_empty(s) || ctx.is_empty(t)) return alt_true();
    if (i == negs.size()) return alt_or(norm(s), norm(t));
    const auto& [sj, tj] = negs[i];
    AltSet a = norm_products(store.diff(s, sj), t, negs, i + 1);
    if (a.empty()) return a;
    AltSet b = norm_products(s, store.diff(t, tj), negs, i + 1);
    return alt_and(a, b);
  }

  AltSet norm_arrow(TypeRef neg_dom, TypeRef neg_cod,
                    const std::vector<std::pair<TypeRef, TypeRef>>& pos,
                    TypeRef dom, TypeRef cod, size_t i, bool picked) {
    if (ctx.is_empty(dom)) return alt_true();
    if (i == pos.size()) {
      AltSet a = norm(dom);
      if (!picked) return a;
      return alt_or(a, norm(store.diff(cod, neg_cod)));
    }
    const auto& [si, ti] = pos[i];
    AltSet a = norm_arrow(neg_dom, neg_cod, pos, store.intersect(dom, si),
                          store.intersect(cod, ti), i + 1, true);
    if (a.empty()) return a;
    AltSet b = norm_arrow(neg_dom, neg_cod, pos, store.diff(dom, si), cod, i + 1,
                          picked);
    return alt_and(a, b);
  }

  // --- Backtracking search over alternatives --------------------------------
  //
  // Depth-first over the per-constraint alternatives with incremental
  // saturation: merging a choice immediately normalizes the new lower/upper
  // bound pairs, so contradictory picks die before the remaining constraints
  // multiply them out.

  struct SearchState {
    BoundSet bounds;
    std::set<std::pair<TypeRef, TypeRef>> processed;
  };

  size_t dfs_nodes = 0;
  size_t result_cap = opts.max_solutions;
  size_t node_budget() const { return opts.max_alternatives; }

  void charge(size_t n) {
    dfs_nodes += n;
    if (dfs_nodes > node_budget())
      throw ResourceLimitError("tally: constraint alternatives exceeded " +
                               std::to_string(node_budget()));
  }

  void dfs(const std::vector<AltSet>& per_constraint, size_t ci, SearchState st,
           std::vector<BoundSet>& results) {
    if (results.size() >= result_cap) return;
    // Saturate: normalize the first unprocessed lower/upper pair. Forced
    // steps are free; only genuine alternatives count against the budget.
    for (size_t i = 0; i < st.bounds.size(); ++i) {
      const Bound& lo = st.bounds[i];
      if (lo.is_upper) continue;
      for (size_t j = 0; j < st.bounds.size(); ++j) {
        const Bound& hi = st.bounds[j];
        if (!hi.is_upper || hi.var != lo.var) continue;
        auto key = std::make_pair(lo.bound, hi.bound);
        if (st.processed.count(key)) continue;
        st.processed.insert(key);
        AltSet extra = norm(store.diff(key.first, key.second));
        if (extra.size() > 1) charge(extra.size() - 1);
        for (const BoundSet& add : extra) {
          SearchState next = st;
          next.bounds.insert(next.bounds.end(), add.begin(), add.end());
          canonize(next.bounds);
          dfs(per_constraint, ci, std::move(next), results);
          if (results.size() >= result_cap) return;
        }
        return;  // all saturation branches handled recursively
      }
    }
    if (ci == per_constraint.size()) {
      charge(1);
      results.push_back(st.bounds);
      return;
    }
    const AltSet& choices = per_constraint[ci];
    if (choices.size() > 1) charge(choices.size() - 1);
    for (const BoundSet& choice : choices) {
      SearchState next = st;
      next.bounds.insert(next.bounds.end(), choice.begin(), choice.end());
      canonize(next.bounds);
      dfs(per_constraint, ci + 1, std::move(next), results);
      if (results.size() >= result_cap) return;
    }
  }

  // --- Solving --------------------------------------------------------------

  TypeRef mu_close(TyVar v, TypeRef body) {
    const auto& fv = store.free_vars(body);
    if (std::find(fv.begin(), fv.end(), v) == fv.end()) return body;
    TypeRef hole = store.make_hole();
    TypeSubst s{{v, hole}};
    TypeRef r = apply_subst(store, body, s);
    assert(r != hole && "degenerate recursive equation");
    store.patch(hole, r);
    return hole;
  }

  // Turns a saturated bound set into a substitution. With `slack`, each
  // variable keeps a fresh variable above its lower bound; without it the
  // variable is pinned between its bounds.
  TypeSubst solve(const BoundSet& bounds, bool slack) {
    std::map<TyVar, std::pair<std::vector<TypeRef>, std::vector<TypeRef>>> by_var;
    for (const Bound& b : bounds) {
      auto& entry = by_var[b.var];
      (b.is_upper ? entry.second : entry.first).push_back(b.bound);
    }
    std::vector<TyVar> order;
    std::map<TyVar, TypeRef> eq;
    for (auto& [v, lu] : by_var) {
      order.push_back(v);
      TypeRef lower = store.unite(std::move(lu.first));
      TypeRef upper = store.intersect(std::move(lu.second));
      TypeRef rhs;
      if (slack) {
        TypeRef beta = store.var(store.fresh_var(store.var_name(v) + "'"));
        rhs = store.intersect(store.unite(lower, beta), upper);
      } else {
        rhs = store.intersect(store.unite(lower, store.bottom()), upper);
      }
      eq[v] = rhs;
    }
    // Forward: close each equation and substitute it into the later ones.
    std::map<TyVar, TypeRef> sol;
    for (size_t i = 0; i < order.size(); ++i) {
      TyVar v = order[i];
      TypeRef closed = mu_close(v, eq[v]);
      sol[v] = closed;
      TypeSubst s{{v, closed}};
      for (size_t j = i + 1; j < order.size(); ++j)
        eq[order[j]] = apply_subst(store, eq[order[j]], s);
    }
    // Backward: propagate later solutions into earlier ones.
    for (size_t i = order.size(); i-- > 0;) {
      TypeSubst later;
      for (size_t j = i + 1; j < order.size(); ++j)
        later[order[j]] = sol[order[j]];
      sol[order[i]] = apply_subst(store, sol[order[i]], later);
    }
    TypeSubst out;
    for (auto& [v, t] : sol) out[v] = t;
    return out;
  }
};

}  // namespace

namespace {

// Solves one connected component of the constraint set.
std::vector<TypeSubst> solve_component(SubtypeCtx& ctx, const std::set<TyVar>& fixed,
                                       const SubtypeConstraintSet& constraints,
                                       const TallyOptions& opts) {
  Solver solver{ctx, ctx.store(), fixed, opts};
  std::vector<AltSet> per_constraint;
  for (const SubtypeConstraint& c : constraints) {
    AltSet one = solver.norm(ctx.store().diff(c.lower, c.upper));
    if (one.empty()) return {};
    per_constraint.push_back(std::move(one));
  }
  // Forced and small alternative sets first: fail fast, branch late.
  std::stable_sort(per_constraint.begin(), per_constraint.end(),
                   [](const AltSet& a, const AltSet& b) {
                     return a.size() < b.size();
                   });
  std::vector<BoundSet> saturated;
  solver.dfs(per_constraint, 0, Solver::SearchState{}, saturated);
  std::sort(saturated.begin(), saturated.end());
  saturated.erase(std::unique(saturated.begin(), saturated.end()), saturated.end());

  std::vector<TypeSubst> out;
  auto satisfies = [&](const TypeSubst& theta) {
    for (const SubtypeConstraint& c : constraints) {
      if (!ctx.is_subtype(apply_subst(ctx.store(), c.lower, theta),
                          apply_subst(ctx.store(), c.upper, theta)))
        return false;
    }
    return true;
  };
  auto equivalent = [&](const TypeSubst& a, const TypeSubst& b) {
    std::set<TyVar> dom;
    for (const auto& [v, t] : a) dom.insert(v);
    for (const auto& [v, t] : b) dom.insert(v);
    for (TyVar v : dom) {
      auto ia = a.find(v), ib = b.find(v);
      TypeRef ta = ia != a.end() ? ia->second : ctx.store().var(v);
      TypeRef tb = ib != b.end() ? ib->second : ctx.store().var(v);
      if (!ctx.equiv(ta, tb)) return false;
    }
    return true;
  };
  for (const BoundSet& bounds : saturated) {
    // The pinned solution first by default: it keeps case-branch input
    // types tight, which branch skipping depends on. The slack variant
    // restores the parametric family.
    bool order[2] = {opts.prefer_general, !opts.prefer_general};
    for (bool slack : order) {
      TypeSubst theta = solver.solve(bounds, slack);
      if (!satisfies(theta)) continue;
      bool dup = false;
      for (const TypeSubst& seen : out) {
        if (equivalent(seen, theta)) {
          dup = true;
          break;
        }
      }
      if (!dup) out.push_back(std::move(theta));
    }
  }
  return out;
}

}  // namespace

std::vector<TypeSubst> tally(SubtypeCtx& ctx, const std::set<TyVar>& fixed,
                             const SubtypeConstraintSet& constraints,
                             const TallyOptions& opts) {
  // Constraints that share no solvable variable cannot interact; solve the
  // connected components separately and combine their solution lists. This
  // keeps independent alternative sets from being multiplied out.
  TypeStore& store = ctx.store();
  std::vector<int> comp(constraints.size());
  std::map<TyVar, std::vector<size_t>> by_var;
  for (size_t i = 0; i < constraints.size(); ++i) {
    comp[i] = static_cast<int>(i);
    for (TypeRef side : {constraints[i].lower, constraints[i].upper}) {
      for (TyVar v : store.free_vars(side)) {
        if (!fixed.count(v)) by_var[v].push_back(i);
      }
    }
  }
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (const auto& [v, members] : by_var) {
    for (size_t k = 1; k < members.size(); ++k) {
      int a = find((int)members[0]);
      int b = find((int)members[k]);
      if (a != b) comp[b] = a;
    }
  }
  std::map<int, SubtypeConstraintSet> groups;
  for (size_t i = 0; i < constraints.size(); ++i)
    groups[find((int)i)].push_back(constraints[i]);

  std::vector<std::vector<TypeSubst>> component_solutions;
  for (const auto& [root, group] : groups) {
    std::vector<TypeSubst> sols = solve_component(ctx, fixed, group, opts);
    if (sols.empty()) return {};
    component_solutions.push_back(std::move(sols));
  }
  if (component_solutions.empty()) {
    return {TypeSubst{}};
  }

  // Cartesian combination in odometer order (last component fastest),
  // capped; every combination is a valid solution because domains are
  // disjoint.
  std::vector<TypeSubst> out;
  std::vector<size_t> idx(component_solutions.size(), 0);
  const size_t combo_cap = 100;
  for (;;) {
    TypeSubst merged;
    for (size_t k = 0; k < idx.size(); ++k) {
      for (const auto& [v, t] : component_solutions[k][idx[k]]) merged[v] = t;
    }
    if (g_audit_hook) g_audit_hook(ctx, constraints, merged);
    out.push_back(std::move(merged));
    if (out.size() >= combo_cap) break;
    size_t k = idx.size();
    while (k-- > 0) {
      if (++idx[k] < component_solutions[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (k == SIZE_MAX) break;
  }
  return out;
}

}  // namespace minerl
