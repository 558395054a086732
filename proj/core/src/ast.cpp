#include "minerl/ast.hpp"

#include <map>

namespace minerl {

PatternPtr Pattern::make_const(Constant c, Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = PatternKind::Const;
  p->constant = std::move(c);
  p->span = s;
  return p;
}

PatternPtr Pattern::make_wild(Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = PatternKind::Wild;
  p->span = s;
  return p;
}

PatternPtr Pattern::make_var(Symbol v, Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = PatternKind::Var;
  p->var = v;
  p->span = s;
  return p;
}

PatternPtr Pattern::make_pair(PatternPtr l, PatternPtr r, Span s) {
  auto p = std::make_shared<Pattern>();
  p->kind = PatternKind::Pair;
  p->left = std::move(l);
  p->right = std::move(r);
  p->span = s;
  return p;
}

GuardPtr Guard::make_is(BaseType b, ExprPtr subject, Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = GuardKind::Is;
  g->base = std::move(b);
  g->subject = std::move(subject);
  g->span = s;
  return g;
}

GuardPtr Guard::make_and(GuardPtr l, GuardPtr r, Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = GuardKind::And;
  g->lhs = std::move(l);
  g->rhs = std::move(r);
  g->span = s;
  return g;
}

GuardPtr Guard::make_true(Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = GuardKind::True;
  g->span = s;
  return g;
}

GuardPtr Guard::make_oracle(Span s) {
  auto g = std::make_shared<Guard>();
  g->kind = GuardKind::Oracle;
  g->span = s;
  return g;
}

ExprPtr Expr::make_var(Symbol v, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->var = v;
  e->span = s;
  return e;
}

ExprPtr Expr::make_const(Constant c, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Const;
  e->constant = std::move(c);
  e->span = s;
  return e;
}

ExprPtr Expr::make_abs(Symbol param, ExprPtr body, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Abs;
  e->var = param;
  e->child1 = std::move(body);
  e->span = s;
  return e;
}

ExprPtr Expr::make_app(ExprPtr fn, ExprPtr arg, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::App;
  e->child1 = std::move(fn);
  e->child2 = std::move(arg);
  e->span = s;
  return e;
}

ExprPtr Expr::make_pair(ExprPtr l, ExprPtr r, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pair;
  e->child1 = std::move(l);
  e->child2 = std::move(r);
  e->span = s;
  return e;
}

ExprPtr Expr::make_case(ExprPtr scrutinee, std::vector<Clause> clauses, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Case;
  e->child1 = std::move(scrutinee);
  e->clauses = std::move(clauses);
  e->span = s;
  return e;
}

ExprPtr Expr::make_letrec(std::vector<Definition> defs, ExprPtr body, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Letrec;
  e->defs = std::move(defs);
  e->child1 = std::move(body);
  e->span = s;
  return e;
}

namespace {

void collect_bound(const PatternPtr& p, std::set<Symbol>& out) {
  switch (p->kind) {
    case PatternKind::Const:
    case PatternKind::Wild:
      break;
    case PatternKind::Var:
      out.insert(p->var);
      break;
    case PatternKind::Pair:
      collect_bound(p->left, out);
      collect_bound(p->right, out);
      break;
  }
}

void collect_free(const ExprPtr& e, std::set<Symbol>& bound, std::set<Symbol>& out);

void collect_free_guard(const GuardPtr& g, std::set<Symbol>& bound,
                        std::set<Symbol>& out) {
  switch (g->kind) {
    case GuardKind::Is:
      collect_free(g->subject, bound, out);
      break;
    case GuardKind::And:
      collect_free_guard(g->lhs, bound, out);
      collect_free_guard(g->rhs, bound, out);
      break;
    default:
      break;
  }
}

void collect_free(const ExprPtr& e, std::set<Symbol>& bound, std::set<Symbol>& out) {
  switch (e->kind) {
    case ExprKind::Var:
      if (!bound.count(e->var)) out.insert(e->var);
      break;
    case ExprKind::Const:
      break;
    case ExprKind::Abs: {
      bool fresh = bound.insert(e->var).second;
      collect_free(e->child1, bound, out);
      if (fresh) bound.erase(e->var);
      break;
    }
    case ExprKind::App:
    case ExprKind::Pair:
      collect_free(e->child1, bound, out);
      collect_free(e->child2, bound, out);
      break;
    case ExprKind::Case: {
      collect_free(e->child1, bound, out);
      for (const auto& cl : e->clauses) {
        std::set<Symbol> pvars;
        collect_bound(cl.guarded_pattern.pattern, pvars);
        std::vector<Symbol> added;
        for (Symbol v : pvars)
          if (bound.insert(v).second) added.push_back(v);
        collect_free_guard(cl.guarded_pattern.guard, bound, out);
        collect_free(cl.body, bound, out);
        for (Symbol v : added) bound.erase(v);
      }
      break;
    }
    case ExprKind::Letrec: {
      std::vector<Symbol> added;
      for (const auto& d : e->defs)
        if (bound.insert(d.name).second) added.push_back(d.name);
      for (const auto& d : e->defs) collect_free(d.rhs, bound, out);
      collect_free(e->child1, bound, out);
      for (Symbol v : added) bound.erase(v);
      break;
    }
  }
}

}  // namespace

std::set<Symbol> free_vars(const ExprPtr& e) {
  std::set<Symbol> bound, out;
  collect_free(e, bound, out);
  return out;
}

std::set<Symbol> bound_vars(const PatternPtr& p) {
  std::set<Symbol> out;
  collect_bound(p, out);
  return out;
}

std::set<Symbol> guard_vars(const GuardPtr& g) {
  std::set<Symbol> out;
  switch (g->kind) {
    case GuardKind::Is: {
      std::set<Symbol> bound;
      collect_free(g->subject, bound, out);
      break;
    }
    case GuardKind::And: {
      auto l = guard_vars(g->lhs);
      auto r = guard_vars(g->rhs);
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
      break;
    }
    default:
      break;
  }
  return out;
}

bool guard_has_oracle(const GuardPtr& g) {
  switch (g->kind) {
    case GuardKind::Oracle: return true;
    case GuardKind::And: return guard_has_oracle(g->lhs) || guard_has_oracle(g->rhs);
    default: return false;
  }
}

namespace {

bool count_dup(const PatternPtr& p, std::set<Symbol>& seen) {
  switch (p->kind) {
    case PatternKind::Var:
      return !seen.insert(p->var).second;
    case PatternKind::Pair:
      return count_dup(p->left, seen) || count_dup(p->right, seen);
    default:
      return false;
  }
}

using NameMap = std::map<Symbol, Symbol>;

bool alpha_pattern(const PatternPtr& a, const PatternPtr& b, NameMap& ab) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PatternKind::Const: return a->constant == b->constant;
    case PatternKind::Wild: return true;
    case PatternKind::Var: {
      auto it = ab.find(a->var);
      if (it != ab.end()) return it->second == b->var;
      ab[a->var] = b->var;
      return true;
    }
    case PatternKind::Pair:
      return alpha_pattern(a->left, b->left, ab) &&
             alpha_pattern(a->right, b->right, ab);
  }
  return false;
}

bool alpha_expr(const ExprPtr& a, const ExprPtr& b, NameMap ab);

bool alpha_guard(const GuardPtr& a, const GuardPtr& b, const NameMap& ab) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case GuardKind::Is:
      return a->base == b->base && alpha_expr(a->subject, b->subject, ab);
    case GuardKind::And:
      return alpha_guard(a->lhs, b->lhs, ab) && alpha_guard(a->rhs, b->rhs, ab);
    default:
      return true;
  }
}

bool alpha_expr(const ExprPtr& a, const ExprPtr& b, NameMap ab) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Var: {
      auto it = ab.find(a->var);
      return it != ab.end() ? it->second == b->var : a->var == b->var;
    }
    case ExprKind::Const:
      return a->constant == b->constant;
    case ExprKind::Abs: {
      ab[a->var] = b->var;
      return alpha_expr(a->child1, b->child1, ab);
    }
    case ExprKind::App:
    case ExprKind::Pair:
      return alpha_expr(a->child1, b->child1, ab) &&
             alpha_expr(a->child2, b->child2, ab);
    case ExprKind::Case: {
      if (a->clauses.size() != b->clauses.size()) return false;
      if (!alpha_expr(a->child1, b->child1, ab)) return false;
      for (size_t i = 0; i < a->clauses.size(); ++i) {
        NameMap inner = ab;
        if (!alpha_pattern(a->clauses[i].guarded_pattern.pattern,
                           b->clauses[i].guarded_pattern.pattern, inner))
          return false;
        if (!alpha_guard(a->clauses[i].guarded_pattern.guard,
                         b->clauses[i].guarded_pattern.guard, inner))
          return false;
        if (!alpha_expr(a->clauses[i].body, b->clauses[i].body, inner))
          return false;
      }
      return true;
    }
    case ExprKind::Letrec: {
      if (a->defs.size() != b->defs.size()) return false;
      for (size_t i = 0; i < a->defs.size(); ++i)
        ab[a->defs[i].name] = b->defs[i].name;
      for (size_t i = 0; i < a->defs.size(); ++i) {
        if (a->defs[i].annotation.has_value() != b->defs[i].annotation.has_value())
          return false;
        if (!alpha_expr(a->defs[i].rhs, b->defs[i].rhs, ab)) return false;
      }
      return alpha_expr(a->child1, b->child1, ab);
    }
  }
  return false;
}

}  // namespace

bool pattern_is_nonlinear(const PatternPtr& p) {
  std::set<Symbol> seen;
  return count_dup(p, seen);
}

bool pattern_has_float_constant(const PatternPtr& p) {
  switch (p->kind) {
    case PatternKind::Const:
      return p->constant.kind == ConstKind::Float;
    case PatternKind::Pair:
      return pattern_has_float_constant(p->left) ||
             pattern_has_float_constant(p->right);
    default:
      return false;
  }
}

bool alpha_equiv(const ExprPtr& a, const ExprPtr& b) {
  return alpha_expr(a, b, NameMap());
}

}  // namespace minerl
