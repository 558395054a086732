#include <chrono>
#include <fstream>

#include "doctest.h"
#include "minerl/interp.hpp"
#include "minerl/parser.hpp"
#include "minerl/pretty.hpp"

using namespace minerl;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(MINERL_CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

struct Verdict {
  bool parse_ok = false;
  bool check_ok = false;
  std::vector<Diagnostic> diagnostics;
};

Verdict run(const std::string& name) {
  Verdict v;
  TypeStore store;
  SubtypeCtx ctx(store);
  ParseResult pr = parse(store, {name, read_file(name)});
  v.diagnostics = pr.diagnostics;
  if (!pr.ok()) return v;
  v.parse_ok = true;
  CheckResult cr = check_module(ctx, *pr.module);
  for (auto& d : cr.diagnostics) v.diagnostics.push_back(d);
  v.check_ok = cr.ok();
  return v;
}

}  // namespace

TEST_CASE("safe_div and safe_div_alt are accepted") {
  CHECK(run("safe_div.mei").check_ok);
  CHECK(run("safe_div_alt.mei").check_ok);
}

TEST_CASE("last_day_of_the_month under both signatures") {
  CHECK(run("last_day_precise.mei").check_ok);
  CHECK(run("last_day_coarse.mei").check_ok);
}

TEST_CASE("tree lookup accepted, BadTree rejected") {
  CHECK(run("tree.mei").check_ok);
  Verdict bad = run("tree_bad.mei");
  CHECK(bad.parse_ok);
  CHECK(!bad.check_ok);
  bool in_lookup = false;
  for (const auto& d : bad.diagnostics)
    in_lookup |= d.severity == Severity::Error && d.line >= 14;
  CHECK(in_lookup);
}

TEST_CASE("the pretty printer guard example is accepted") {
  CHECK(run("pretty_ty.mei").check_ok);
}

TEST_CASE("higher-order map over a parametric tree type") {
  Verdict v = run("poly_tree.mei");
  CHECK(v.check_ok);
}

TEST_CASE("perfect is rejected as non-regular") {
  Verdict v = run("perfect.mei");
  CHECK(!v.parse_ok);
  REQUIRE(!v.diagnostics.empty());
  CHECK(v.diagnostics[0].code == "non-regular");
}

TEST_CASE("filtermap checks against all three members") {
  auto start = std::chrono::steady_clock::now();
  Verdict v = run("filtermap.mei");
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  CAPTURE(secs.count());
  for (auto& d : v.diagnostics) CAPTURE(render_diagnostic(d));
  CHECK(v.check_ok);
  CHECK(secs.count() < 300.0);
}

TEST_CASE("exhaustiveness and redundancy verdicts") {
  Verdict bad = run("exhaustiveness_bad.mei");
  CHECK(bad.parse_ok);
  CHECK(!bad.check_ok);
  bool non_exhaustive = false;
  for (const auto& d : bad.diagnostics) non_exhaustive |= d.code == "non-exhaustive";
  CHECK(non_exhaustive);

  Verdict dead = run("dead_branch.mei");
  CHECK(dead.check_ok);
  bool warned = false;
  for (const auto& d : dead.diagnostics)
    warned |= d.code == "dead-branch" && d.severity == Severity::Warning;
  CHECK(warned);
}

namespace {

// Systematic binder renaming; verdicts must not change.
struct TestRenamer {
  int counter = 0;
  std::map<Symbol, Symbol> top;

  Symbol fresh(Symbol base) {
    return intern_symbol(symbol_name(base) + "_rn" + std::to_string(++counter));
  }

  ExprPtr expr(const ExprPtr& e, std::map<Symbol, Symbol> scope) {
    switch (e->kind) {
      case ExprKind::Var: {
        auto it = scope.find(e->var);
        return it == scope.end() ? e : Expr::make_var(it->second, e->span);
      }
      case ExprKind::Const:
        return e;
      case ExprKind::Abs: {
        Symbol f = fresh(e->var);
        scope[e->var] = f;
        return Expr::make_abs(f, expr(e->child1, scope), e->span);
      }
      case ExprKind::App:
        return Expr::make_app(expr(e->child1, scope), expr(e->child2, scope), e->span);
      case ExprKind::Pair:
        return Expr::make_pair(expr(e->child1, scope), expr(e->child2, scope), e->span);
      case ExprKind::Case: {
        ExprPtr scrut = expr(e->child1, scope);
        std::vector<Clause> cls;
        for (const Clause& c : e->clauses) {
          auto inner = scope;
          for (Symbol b : bound_vars(c.guarded_pattern.pattern)) inner[b] = fresh(b);
          Clause nc;
          nc.guarded_pattern.pattern = pat(c.guarded_pattern.pattern, inner);
          nc.guarded_pattern.guard = guard(c.guarded_pattern.guard, inner);
          nc.body = expr(c.body, inner);
          cls.push_back(std::move(nc));
        }
        return Expr::make_case(scrut, std::move(cls), e->span);
      }
      case ExprKind::Letrec: {
        auto inner = scope;
        for (const Definition& d : e->defs) inner[d.name] = fresh(d.name);
        std::vector<Definition> defs;
        for (const Definition& d : e->defs) {
          Definition nd = d;
          nd.name = inner[d.name];
          nd.rhs = expr(d.rhs, inner);
          defs.push_back(std::move(nd));
        }
        return Expr::make_letrec(std::move(defs), expr(e->child1, inner), e->span);
      }
    }
    return e;
  }

  PatternPtr pat(const PatternPtr& p, const std::map<Symbol, Symbol>& scope) {
    switch (p->kind) {
      case PatternKind::Var: {
        auto it = scope.find(p->var);
        return Pattern::make_var(it == scope.end() ? p->var : it->second, p->span);
      }
      case PatternKind::Pair:
        return Pattern::make_pair(pat(p->left, scope), pat(p->right, scope), p->span);
      default:
        return p;
    }
  }

  GuardPtr guard(const GuardPtr& g, const std::map<Symbol, Symbol>& scope) {
    switch (g->kind) {
      case GuardKind::Is:
        return Guard::make_is(g->base, expr(g->subject, scope), g->span);
      case GuardKind::And:
        return Guard::make_and(guard(g->lhs, scope), guard(g->rhs, scope), g->span);
      default:
        return g;
    }
  }
};

}  // namespace

TEST_CASE("alpha-renaming preserves verdicts") {
  const char* files[] = {"safe_div.mei", "tree.mei", "tree_bad.mei",
                         "pretty_ty.mei", "dead_branch.mei"};
  for (const char* f : files) {
    CAPTURE(f);
    TypeStore store;
    SubtypeCtx ctx(store);
    ParseResult pr = parse(store, {f, read_file(f)});
    REQUIRE(pr.ok());
    bool before = check_module(ctx, *pr.module).ok();

    Module renamed = *pr.module;
    TestRenamer rn;
    std::map<Symbol, Symbol> top;
    for (Definition& d : renamed.defs) top[d.name] = rn.fresh(d.name);
    for (Definition& d : renamed.defs) {
      d.name = top[d.name];
      d.rhs = rn.expr(d.rhs, top);
    }
    if (renamed.main) renamed.main = rn.expr(renamed.main, top);
    bool after = check_module(ctx, renamed).ok();
    REQUIRE(before == after);
  }
}
