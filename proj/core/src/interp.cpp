#include "minerl/interp.hpp"

#include <cassert>

namespace minerl {

namespace {

// v matches b when TyOfConst(v) is b or a base subtype of b.
bool const_matches_base(const Constant& c, const BaseType& b) {
  BaseType cb = type_of_constant(c);
  if (cb == b) return true;
  if (cb.kind == BaseKind::IntSingleton && b.kind == BaseKind::Int) return true;
  if (cb.kind == BaseKind::AtomSingleton && b.kind == BaseKind::Atom) return true;
  return false;
}

}  // namespace

bool value_matches_base(const ValuePtr& v, const BaseType& b) {
  switch (v->kind) {
    case ValueKind::Const:
      return const_matches_base(v->constant, b);
    case ValueKind::Pair:
      return b.kind == BaseKind::AnyPair;
    case ValueKind::Closure:
      return b.kind == BaseKind::AnyFun;
  }
  return false;
}

namespace {

std::optional<ValueSubst> match_pattern(const ValuePtr& v, const PatternPtr& p) {
  switch (p->kind) {
    case PatternKind::Const:
      if (v->kind == ValueKind::Const && v->constant == p->constant)
        return ValueSubst{};
      return std::nullopt;
    case PatternKind::Wild:
      return ValueSubst{};
    case PatternKind::Var:
      return ValueSubst{{p->var, v}};
    case PatternKind::Pair: {
      if (v->kind != ValueKind::Pair) return std::nullopt;
      auto l = match_pattern(v->left, p->left);
      if (!l) return std::nullopt;
      auto r = match_pattern(v->right, p->right);
      if (!r) return std::nullopt;
      // Duplicate variables must have matched equal values.
      for (const auto& [name, val] : *r) {
        auto it = l->find(name);
        if (it != l->end()) {
          if (!value_equal(it->second, val)) return std::nullopt;
        } else {
          l->emplace(name, val);
        }
      }
      return l;
    }
  }
  return std::nullopt;
}

enum class GuardOutcome : uint8_t { True, False, Stuck };

GuardOutcome eval_guard_value(const GuardPtr& g, const ValueSubst& binds,
                              OracleSource& oracle) {
  switch (g->kind) {
    case GuardKind::True:
      return GuardOutcome::True;
    case GuardKind::Oracle:
      return oracle.next() ? GuardOutcome::True : GuardOutcome::False;
    case GuardKind::And: {
      GuardOutcome l = eval_guard_value(g->lhs, binds, oracle);
      if (l != GuardOutcome::True) return l;
      return eval_guard_value(g->rhs, binds, oracle);
    }
    case GuardKind::Is: {
      const Expr& subj = *g->subject;
      if (subj.kind == ExprKind::Var) {
        auto it = binds.find(subj.var);
        if (it == binds.end()) return GuardOutcome::Stuck;
        return value_matches_base(it->second, g->base) ? GuardOutcome::True
                                                       : GuardOutcome::False;
      }
      if (subj.kind == ExprKind::Const) {
        return const_matches_base(subj.constant, g->base) ? GuardOutcome::True
                                                          : GuardOutcome::False;
      }
      return GuardOutcome::Stuck;
    }
  }
  return GuardOutcome::Stuck;
}

}  // namespace

MatchResult match(const ValuePtr& v, const GuardedPattern& pg, OracleSource& oracle) {
  MatchResult res;
  auto binds = match_pattern(v, pg.pattern);
  if (!binds) {
    res.status = MatchStatus::Fail;
    return res;
  }
  switch (eval_guard_value(pg.guard, *binds, oracle)) {
    case GuardOutcome::True:
      res.status = MatchStatus::Matched;
      res.binds = std::move(*binds);
      return res;
    case GuardOutcome::False:
      res.status = MatchStatus::Fail;
      return res;
    case GuardOutcome::Stuck:
      res.status = MatchStatus::Stuck;
      return res;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Small-step reduction on terms. Values substituted into terms stay plain
// expressions; letrec-bound names resolve through the environment threaded
// along the letrec wrappers still present in the term.

bool is_value_term(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Abs:
      return true;
    case ExprKind::Pair:
      return is_value_term(e->child1) && is_value_term(e->child2);
    default:
      return false;
  }
}

namespace {

using TermSubst = std::map<Symbol, ExprPtr>;

GuardPtr subst_guard(const GuardPtr& g, const TermSubst& s);

ExprPtr subst_expr(const ExprPtr& e, const TermSubst& s) {
  if (s.empty()) return e;
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = s.find(e->var);
      return it != s.end() ? it->second : e;
    }
    case ExprKind::Const:
      return e;
    case ExprKind::Abs: {
      TermSubst inner = s;
      inner.erase(e->var);
      ExprPtr body = subst_expr(e->child1, inner);
      return body == e->child1 ? e : Expr::make_abs(e->var, body, e->span);
    }
    case ExprKind::App: {
      ExprPtr f = subst_expr(e->child1, s);
      ExprPtr a = subst_expr(e->child2, s);
      return f == e->child1 && a == e->child2 ? e : Expr::make_app(f, a, e->span);
    }
    case ExprKind::Pair: {
      ExprPtr l = subst_expr(e->child1, s);
      ExprPtr r = subst_expr(e->child2, s);
      return l == e->child1 && r == e->child2 ? e : Expr::make_pair(l, r, e->span);
    }
    case ExprKind::Case: {
      ExprPtr scrut = subst_expr(e->child1, s);
      std::vector<Clause> clauses;
      clauses.reserve(e->clauses.size());
      for (const Clause& c : e->clauses) {
        TermSubst inner = s;
        for (Symbol b : bound_vars(c.guarded_pattern.pattern)) inner.erase(b);
        Clause nc;
        nc.guarded_pattern.pattern = c.guarded_pattern.pattern;
        nc.guarded_pattern.guard = subst_guard(c.guarded_pattern.guard, inner);
        nc.body = subst_expr(c.body, inner);
        clauses.push_back(std::move(nc));
      }
      return Expr::make_case(scrut, std::move(clauses), e->span);
    }
    case ExprKind::Letrec: {
      TermSubst inner = s;
      for (const Definition& d : e->defs) inner.erase(d.name);
      std::vector<Definition> defs;
      defs.reserve(e->defs.size());
      for (const Definition& d : e->defs) {
        Definition nd = d;
        nd.rhs = subst_expr(d.rhs, inner);
        defs.push_back(std::move(nd));
      }
      return Expr::make_letrec(std::move(defs), subst_expr(e->child1, inner), e->span);
    }
  }
  return e;
}

GuardPtr subst_guard(const GuardPtr& g, const TermSubst& s) {
  switch (g->kind) {
    case GuardKind::Is: {
      ExprPtr subj = subst_expr(g->subject, s);
      return subj == g->subject ? g : Guard::make_is(g->base, subj, g->span);
    }
    case GuardKind::And: {
      GuardPtr l = subst_guard(g->lhs, s);
      GuardPtr r = subst_guard(g->rhs, s);
      return l == g->lhs && r == g->rhs ? g : Guard::make_and(l, r, g->span);
    }
    default:
      return g;
  }
}

bool term_value_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const:
      return a->constant == b->constant;
    case ExprKind::Pair:
      return term_value_equal(a->child1, b->child1) &&
             term_value_equal(a->child2, b->child2);
    default:
      return false;  // closures are never equal
  }
}

bool term_matches_base(const ExprPtr& v, const BaseType& b) {
  switch (v->kind) {
    case ExprKind::Const:
      return const_matches_base(v->constant, b);
    case ExprKind::Pair:
      return b.kind == BaseKind::AnyPair;
    case ExprKind::Abs:
      return b.kind == BaseKind::AnyFun;
    default:
      return false;
  }
}

std::optional<TermSubst> term_match_pattern(const ExprPtr& v, const PatternPtr& p) {
  switch (p->kind) {
    case PatternKind::Const:
      if (v->kind == ExprKind::Const && v->constant == p->constant)
        return TermSubst{};
      return std::nullopt;
    case PatternKind::Wild:
      return TermSubst{};
    case PatternKind::Var:
      return TermSubst{{p->var, v}};
    case PatternKind::Pair: {
      if (v->kind != ExprKind::Pair) return std::nullopt;
      auto l = term_match_pattern(v->child1, p->left);
      if (!l) return std::nullopt;
      auto r = term_match_pattern(v->child2, p->right);
      if (!r) return std::nullopt;
      for (const auto& [name, val] : *r) {
        auto it = l->find(name);
        if (it != l->end()) {
          if (!term_value_equal(it->second, val)) return std::nullopt;
        } else {
          l->emplace(name, val);
        }
      }
      return l;
    }
  }
  return std::nullopt;
}

GuardOutcome eval_guard_term(const GuardPtr& g, const TermSubst& binds,
                             const EnvPtr& env, OracleSource& oracle) {
  switch (g->kind) {
    case GuardKind::True:
      return GuardOutcome::True;
    case GuardKind::Oracle:
      return oracle.next() ? GuardOutcome::True : GuardOutcome::False;
    case GuardKind::And: {
      GuardOutcome l = eval_guard_term(g->lhs, binds, env, oracle);
      if (l != GuardOutcome::True) return l;
      return eval_guard_term(g->rhs, binds, env, oracle);
    }
    case GuardKind::Is: {
      ExprPtr subj = subst_expr(g->subject, binds);
      if (subj->kind == ExprKind::Var && env) {
        if (const ExprPtr* bound = env->lookup(subj->var)) subj = *bound;
      }
      if (!is_value_term(subj)) return GuardOutcome::Stuck;
      return term_matches_base(subj, g->base) ? GuardOutcome::True
                                              : GuardOutcome::False;
    }
  }
  return GuardOutcome::Stuck;
}

}  // namespace

StepResult step(const EnvPtr& env, const ExprPtr& e, OracleSource& oracle) {
  if (is_value_term(e)) return {StepStatus::Normal, nullptr, nullptr};
  switch (e->kind) {
    case ExprKind::Var: {
      if (env) {
        if (const ExprPtr* v = env->lookup(e->var))
          return {StepStatus::Stepped, *v, nullptr};
      }
      return {StepStatus::Stuck, nullptr, e};
    }
    case ExprKind::App: {
      if (!is_value_term(e->child1)) {
        StepResult r = step(env, e->child1, oracle);
        if (r.status == StepStatus::Stepped)
          return {StepStatus::Stepped, Expr::make_app(r.next, e->child2, e->span),
                  nullptr};
        return {StepStatus::Stuck, nullptr, r.offender ? r.offender : e->child1};
      }
      if (!is_value_term(e->child2)) {
        StepResult r = step(env, e->child2, oracle);
        if (r.status == StepStatus::Stepped)
          return {StepStatus::Stepped, Expr::make_app(e->child1, r.next, e->span),
                  nullptr};
        return {StepStatus::Stuck, nullptr, r.offender ? r.offender : e->child2};
      }
      if (e->child1->kind == ExprKind::Abs) {
        TermSubst s{{e->child1->var, e->child2}};
        return {StepStatus::Stepped, subst_expr(e->child1->child1, s), nullptr};
      }
      return {StepStatus::Stuck, nullptr, e};
    }
    case ExprKind::Pair: {
      if (!is_value_term(e->child1)) {
        StepResult r = step(env, e->child1, oracle);
        if (r.status == StepStatus::Stepped)
          return {StepStatus::Stepped, Expr::make_pair(r.next, e->child2, e->span),
                  nullptr};
        return {StepStatus::Stuck, nullptr, r.offender ? r.offender : e->child1};
      }
      StepResult r = step(env, e->child2, oracle);
      if (r.status == StepStatus::Stepped)
        return {StepStatus::Stepped, Expr::make_pair(e->child1, r.next, e->span),
                nullptr};
      return {StepStatus::Stuck, nullptr, r.offender ? r.offender : e->child2};
    }
    case ExprKind::Case: {
      if (!is_value_term(e->child1)) {
        StepResult r = step(env, e->child1, oracle);
        if (r.status == StepStatus::Stepped)
          return {StepStatus::Stepped,
                  Expr::make_case(r.next, e->clauses, e->span), nullptr};
        return {StepStatus::Stuck, nullptr, r.offender ? r.offender : e->child1};
      }
      for (const Clause& c : e->clauses) {
        auto binds = term_match_pattern(e->child1, c.guarded_pattern.pattern);
        if (!binds) continue;
        switch (eval_guard_term(c.guarded_pattern.guard, *binds, env, oracle)) {
          case GuardOutcome::True:
            return {StepStatus::Stepped, subst_expr(c.body, *binds), nullptr};
          case GuardOutcome::False:
            break;
          case GuardOutcome::Stuck:
            return {StepStatus::Stuck, nullptr, e};
        }
      }
      return {StepStatus::Stuck, nullptr, e};  // no clause matched
    }
    case ExprKind::Letrec: {
      std::map<Symbol, ExprPtr> binds;
      for (const Definition& d : e->defs) binds[d.name] = d.rhs;
      EnvPtr inner = EnvFrame::extend(env, std::move(binds));
      if (is_value_term(e->child1)) return {StepStatus::Normal, nullptr, nullptr};
      StepResult r = step(inner, e->child1, oracle);
      if (r.status == StepStatus::Stepped)
        return {StepStatus::Stepped, Expr::make_letrec(e->defs, r.next, e->span),
                nullptr};
      return {StepStatus::Stuck, nullptr, r.offender ? r.offender : e->child1};
    }
    default:
      return {StepStatus::Stuck, nullptr, e};
  }
}

namespace {

ValuePtr term_to_value(const ExprPtr& e, const EnvPtr& env) {
  switch (e->kind) {
    case ExprKind::Const:
      return Value::make_const(e->constant);
    case ExprKind::Abs:
      return Value::make_closure(e->var, e->child1, env);
    case ExprKind::Pair:
      return Value::make_pair(term_to_value(e->child1, env),
                              term_to_value(e->child2, env));
    default:
      assert(false && "not a value term");
      return nullptr;
  }
}

}  // namespace

EvalResult eval_expr(const ExprPtr& start, uint64_t fuel, OracleSource& oracle) {
  ExprPtr e = start;
  EvalResult res;
  for (uint64_t n = 0; n <= fuel; ++n) {
    // A normal form is a value under zero or more letrec wrappers.
    ExprPtr inner = e;
    EnvPtr env = nullptr;
    while (inner->kind == ExprKind::Letrec) {
      std::map<Symbol, ExprPtr> binds;
      for (const Definition& d : inner->defs) binds[d.name] = d.rhs;
      env = EnvFrame::extend(env, std::move(binds));
      inner = inner->child1;
    }
    if (is_value_term(inner)) {
      res.status = EvalStatus::Value;
      res.value = term_to_value(inner, env);
      res.steps = n;
      return res;
    }
    StepResult r = step(nullptr, e, oracle);
    if (r.status == StepStatus::Stuck) {
      res.status = EvalStatus::Stuck;
      res.offender = r.offender;
      res.steps = n;
      return res;
    }
    assert(r.status == StepStatus::Stepped);
    e = r.next;
  }
  res.status = EvalStatus::OutOfFuel;
  res.steps = fuel;
  return res;
}

EvalResult eval(const Module& m, uint64_t fuel, OracleSource& oracle) {
  assert(m.main && "module has no main expression");
  ExprPtr program =
      m.defs.empty() ? m.main : Expr::make_letrec(m.defs, m.main, m.main->span);
  return eval_expr(program, fuel, oracle);
}

}  // namespace minerl
