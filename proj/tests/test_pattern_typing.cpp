#include <random>

#include "doctest.h"
#include "minerl/interp.hpp"
#include "minerl/pattern_typing.hpp"

using namespace minerl;

namespace {

Symbol sym(const char* s) { return intern_symbol(s); }

GuardedPattern gp(PatternPtr p, GuardPtr g = nullptr) {
  return GuardedPattern{std::move(p), g ? std::move(g) : Guard::make_true()};
}

}  // namespace

TEST_CASE("environment intersection") {
  TypeStore store;
  SubtypeCtx ctx(store);
  TypeEnv a, b;
  a.bind_mono(sym("x"), store.int_type());
  b.bind_mono(sym("y"), store.atom_type());
  TypeEnv m = env_intersect(store, a, b);
  CHECK(m.lookup(sym("x"))->body == store.int_type());
  CHECK(m.lookup(sym("y"))->body == store.atom_type());

  TypeEnv c;
  TypeRef onetwo = store.unite(store.int_singleton(1), store.int_singleton(2));
  c.bind_mono(sym("x"), onetwo);
  TypeEnv m2 = env_intersect(store, a, c);
  CHECK(ctx.equiv(m2.lookup(sym("x"))->body, onetwo));

  TypeEnv empty;
  TypeEnv m3 = env_intersect(store, empty, a);
  CHECK(m3.lookup(sym("x"))->body == store.int_type());
  CHECK(m3.binds.size() == 1);
}

TEST_CASE("guard environments") {
  TypeStore store;
  SubtypeCtx ctx(store);
  auto is_int_z = Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("z")));
  TypeEnv e1 = guard_env(store, is_int_z);
  CHECK(e1.lookup(sym("z"))->body == store.int_type());

  CHECK(guard_env(store, Guard::make_oracle()).empty());
  CHECK(guard_env(store, Guard::make_true()).empty());

  auto both = Guard::make_and(
      Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("x"))),
      Guard::make_is(BaseType::of(BaseKind::Atom), Expr::make_var(sym("x"))));
  TypeEnv e2 = guard_env(store, both);
  CHECK(ctx.is_empty(e2.lookup(sym("x"))->body));
}

TEST_CASE("pattern environments") {
  TypeStore store;
  SubtypeCtx ctx(store);
  TypeEnv e1 = pat_env(ctx, store.int_type(), Pattern::make_var(sym("x")));
  CHECK(e1.lookup(sym("x"))->body == store.int_type());

  CHECK(pat_env(ctx, store.top(), Pattern::make_wild()).empty());

  TypeRef t = store.product(store.int_singleton(1), store.int_type());
  TypeEnv e2 = pat_env(
      ctx, t, Pattern::make_pair(Pattern::make_var(sym("a")), Pattern::make_var(sym("b"))));
  CHECK(ctx.equiv(e2.lookup(sym("a"))->body, store.int_singleton(1)));
  CHECK(ctx.equiv(e2.lookup(sym("b"))->body, store.int_type()));

  // scrutinee type with no pair part: both components become empty
  TypeEnv e3 = pat_env(
      ctx, store.int_type(),
      Pattern::make_pair(Pattern::make_var(sym("a")), Pattern::make_var(sym("b"))));
  CHECK(ctx.is_empty(e3.lookup(sym("a"))->body));
  CHECK(ctx.is_empty(e3.lookup(sym("b"))->body));
}

TEST_CASE("pattern types") {
  TypeStore store;
  SubtypeCtx ctx(store);
  TypeEnv empty;
  CHECK(pat_type(store, Pattern::make_const(Constant::make_int(1)), empty) ==
        store.int_singleton(1));
  TypeEnv z;
  z.bind_mono(sym("z"), store.int_type());
  CHECK(pat_type(store, Pattern::make_var(sym("z")), z) == store.int_type());
  CHECK(pat_type(store, Pattern::make_var(sym("w")), z) == store.top());
  // (1, z) with {z: int} is {1, int}
  TypeRef pt = pat_type(
      store,
      Pattern::make_pair(Pattern::make_const(Constant::make_int(1)),
                         Pattern::make_var(sym("z"))),
      z);
  CHECK(pt == store.product(store.int_singleton(1), store.int_type()));
}

TEST_CASE("expressions as patterns") {
  auto x = Expr::make_var(sym("x"));
  auto y = Expr::make_var(sym("y"));
  PatternPtr p = pat_of_expr(x);
  CHECK(p->kind == PatternKind::Var);
  PatternPtr pp = pat_of_expr(Expr::make_pair(x, y));
  CHECK(pp->kind == PatternKind::Pair);
  CHECK(pp->left->kind == PatternKind::Var);
  PatternPtr pw = pat_of_expr(Expr::make_app(x, y));
  CHECK(pw->kind == PatternKind::Wild);
}

// The worked examples: case (x, y) of (1, z) when is int z / (1, _) when
// is int y / with an oracle.
TEST_CASE("potential and accepting types of the worked examples") {
  TypeStore store;
  SubtypeCtx ctx(store);
  auto scrutinee = Expr::make_pair(Expr::make_var(sym("x")), Expr::make_var(sym("y")));
  TypeRef one_int = store.product(store.int_singleton(1), store.int_type());

  // (1, z) when is int z
  auto pg1 = gp(Pattern::make_pair(Pattern::make_const(Constant::make_int(1)),
                                   Pattern::make_var(sym("z"))),
                Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("z"))));
  CHECK(ctx.equiv(potential_type(store, pg1, scrutinee), one_int));
  CHECK(ctx.equiv(accepting_type(store, pg1, scrutinee), one_int));

  // (1, _) when is int y — the test is on the scrutinee variable
  auto pg2 = gp(Pattern::make_pair(Pattern::make_const(Constant::make_int(1)),
                                   Pattern::make_wild()),
                Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("y"))));
  CHECK(ctx.equiv(potential_type(store, pg2, scrutinee), one_int));
  CHECK(ctx.equiv(accepting_type(store, pg2, scrutinee), one_int));

  // (1, _) when is int y and oracle — accepting degrades to none
  auto pg3 = gp(Pattern::make_pair(Pattern::make_const(Constant::make_int(1)),
                                   Pattern::make_wild()),
                Guard::make_and(
                    Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("y"))),
                    Guard::make_oracle()));
  CHECK(ctx.equiv(potential_type(store, pg3, scrutinee), one_int));
  CHECK(ctx.is_empty(accepting_type(store, pg3, scrutinee)));

  // guard on a variable bound nowhere
  auto pg4 = gp(Pattern::make_wild(),
                Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("w"))));
  CHECK(ctx.is_empty(accepting_type(store, pg4, scrutinee)));

  // wildcard matches anything; with a non-pair scrutinee both types are any
  auto pg5 = gp(Pattern::make_wild());
  auto call = Expr::make_app(Expr::make_var(sym("f")), Expr::make_var(sym("x")));
  CHECK(potential_type(store, pg5, call) == store.top());
  CHECK(accepting_type(store, pg5, call) == store.top());
  // against the pair scrutinee the expression view contributes {any, any}
  CHECK(ctx.equiv(potential_type(store, pg5, scrutinee),
                  store.product(store.top(), store.top())));

  // duplicate pattern variables can fail at runtime, so they do not accept
  auto pg6 = gp(Pattern::make_pair(Pattern::make_var(sym("v")),
                                   Pattern::make_var(sym("v"))));
  CHECK(!ctx.is_empty(potential_type(store, pg6, scrutinee)));
  CHECK(ctx.is_empty(accepting_type(store, pg6, scrutinee)));
}

namespace {

// Random arrow-free values over a small universe.
ValuePtr gen_value(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> d(0, depth > 0 ? 4 : 3);
  switch (d(rng)) {
    case 0: return Value::make_const(Constant::make_int((int64_t)(rng() % 3)));
    case 1: return Value::make_const(Constant::make_atom(rng() % 2 ? "a" : "b"));
    case 2: return Value::make_const(Constant::make_float(0.5));
    case 3: return Value::make_const(Constant::make_atom("nil"));
    default:
      return Value::make_pair(gen_value(rng, depth - 1), gen_value(rng, depth - 1));
  }
}

PatternPtr gen_pattern(std::mt19937& rng, int depth, std::vector<Symbol>& vars) {
  std::uniform_int_distribution<int> d(0, depth > 0 ? 5 : 4);
  switch (d(rng)) {
    case 0: return Pattern::make_const(Constant::make_int((int64_t)(rng() % 3)));
    case 1: return Pattern::make_wild();
    case 2: return Pattern::make_const(Constant::make_atom(rng() % 2 ? "a" : "b"));
    case 3: {
      Symbol v = intern_symbol("pv" + std::to_string(vars.size()));
      vars.push_back(v);
      return Pattern::make_var(v);
    }
    case 4: return Pattern::make_const(Constant::make_float(0.5));
    default:
      return Pattern::make_pair(gen_pattern(rng, depth - 1, vars),
                                gen_pattern(rng, depth - 1, vars));
  }
}

ExprPtr value_literal(const ValuePtr& v) {
  if (v->kind == ValueKind::Const) return Expr::make_const(v->constant);
  return Expr::make_pair(value_literal(v->left), value_literal(v->right));
}

}  // namespace

TEST_CASE("accepting is below potential; both agree with the interpreter") {
  TypeStore store;
  SubtypeCtx ctx(store);
  std::mt19937 rng(4242);
  for (int i = 0; i < 400; ++i) {
    std::vector<Symbol> vars;
    PatternPtr p = gen_pattern(rng, 2, vars);
    GuardPtr g = Guard::make_true();
    if (!vars.empty() && rng() % 2) {
      BaseType bases[] = {BaseType::of(BaseKind::Int), BaseType::of(BaseKind::Atom),
                          BaseType::of(BaseKind::AnyPair),
                          BaseType::int_singleton(BigInt(1))};
      g = Guard::make_is(bases[rng() % 4],
                         Expr::make_var(vars[rng() % vars.size()]));
    }
    GuardedPattern pg{p, g};
    ValuePtr v = gen_value(rng, 2);
    ExprPtr lit = value_literal(v);

    TypeRef pot = potential_type(store, pg, lit);
    TypeRef acc = accepting_type(store, pg, lit);
    REQUIRE(ctx.is_subtype(acc, pot));

    OracleSource oracle(1);
    MatchResult m = match(v, pg, oracle);
    TypeRef vt = *value_singleton(store, v);
    if (m.status == MatchStatus::Matched) {
      REQUIRE(ctx.is_subtype(vt, pot));
    }
    if (ctx.is_subtype(vt, acc) && !ctx.is_empty(vt)) {
      REQUIRE(m.status == MatchStatus::Matched);
    }
  }
}

TEST_CASE("env_intersect is commutative and associative up to equivalence") {
  TypeStore store;
  SubtypeCtx ctx(store);
  std::mt19937 rng(77);
  auto rand_env = [&]() {
    TypeEnv env;
    const char* names[] = {"x", "y", "z"};
    TypeRef types[] = {store.int_type(), store.atom_type(),
                       store.unite(store.int_singleton(1), store.int_singleton(2)),
                       store.any_pair()};
    for (const char* n : names)
      if (rng() % 2) env.bind_mono(sym(n), types[rng() % 4]);
    return env;
  };
  for (int i = 0; i < 100; ++i) {
    TypeEnv a = rand_env(), b = rand_env(), c = rand_env();
    TypeEnv ab = env_intersect(store, a, b);
    TypeEnv ba = env_intersect(store, b, a);
    REQUIRE(ab.binds.size() == ba.binds.size());
    for (const auto& [n, s] : ab.binds)
      REQUIRE(ctx.equiv(s.body, ba.lookup(n)->body));
    TypeEnv ab_c = env_intersect(store, ab, c);
    TypeEnv a_bc = env_intersect(store, a, env_intersect(store, b, c));
    REQUIRE(ab_c.binds.size() == a_bc.binds.size());
    for (const auto& [n, s] : ab_c.binds)
      REQUIRE(ctx.equiv(s.body, a_bc.lookup(n)->body));
  }
}

TEST_CASE("guarded pattern environments combine pattern and guard") {
  TypeStore store;
  SubtypeCtx ctx(store);
  // matching {x, y} when is int x against {int|atom, atom}
  GuardedPattern pg{
      Pattern::make_pair(Pattern::make_var(sym("gx")), Pattern::make_var(sym("gy"))),
      Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("gx")))};
  TypeRef t = store.product(store.unite(store.int_type(), store.atom_type()),
                            store.atom_type());
  TypeEnv env = gpat_env(ctx, t, pg);
  CHECK(ctx.equiv(env.lookup(sym("gx"))->body, store.int_type()));
  CHECK(ctx.equiv(env.lookup(sym("gy"))->body, store.atom_type()));
}
