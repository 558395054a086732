#include "doctest.h"
#include "minerl/interp.hpp"
#include "minerl/subtype.hpp"

using namespace minerl;

namespace {

Symbol sym(const char* s) { return intern_symbol(s); }
ExprPtr ci(int64_t v) { return Expr::make_const(Constant::make_int(v)); }
ExprPtr ca(const char* a) { return Expr::make_const(Constant::make_atom(a)); }

}  // namespace

TEST_CASE("value matches base") {
  auto one = Value::make_const(Constant::make_int(1));
  CHECK(value_matches_base(one, BaseType::of(BaseKind::Int)));
  CHECK(value_matches_base(one, BaseType::int_singleton(BigInt(1))));
  CHECK(!value_matches_base(one, BaseType::int_singleton(BigInt(2))));
  CHECK(!value_matches_base(one, BaseType::of(BaseKind::Float)));
  auto pair = Value::make_pair(one, Value::make_const(Constant::make_int(2)));
  CHECK(value_matches_base(pair, BaseType::of(BaseKind::AnyPair)));
  CHECK(!value_matches_base(pair, BaseType::of(BaseKind::Int)));
  auto clo = Value::make_closure(sym("x"), Expr::make_var(sym("x")), nullptr);
  CHECK(value_matches_base(clo, BaseType::of(BaseKind::AnyFun)));
  CHECK(!value_matches_base(clo, BaseType::of(BaseKind::Int)));
  auto f = Value::make_const(Constant::make_float(1.0));
  CHECK(value_matches_base(f, BaseType::of(BaseKind::Float)));
  CHECK(!value_matches_base(f, BaseType::of(BaseKind::Int)));
}

TEST_CASE("matching") {
  OracleSource oracle(3);
  auto v12 = Value::make_pair(Value::make_const(Constant::make_int(1)),
                              Value::make_const(Constant::make_int(2)));
  // {x, y} binds both
  GuardedPattern pg{
      Pattern::make_pair(Pattern::make_var(sym("x")), Pattern::make_var(sym("y"))),
      Guard::make_true()};
  MatchResult m = match(v12, pg, oracle);
  REQUIRE(m.status == MatchStatus::Matched);
  CHECK(m.binds.at(sym("x"))->constant.int_value == BigInt(1));
  CHECK(m.binds.at(sym("y"))->constant.int_value == BigInt(2));

  // {x, x} on (1,2) fails: component values differ
  GuardedPattern dup{
      Pattern::make_pair(Pattern::make_var(sym("x")), Pattern::make_var(sym("x"))),
      Guard::make_true()};
  CHECK(match(v12, dup, oracle).status == MatchStatus::Fail);
  auto v11 = Value::make_pair(Value::make_const(Constant::make_int(1)),
                              Value::make_const(Constant::make_int(1)));
  CHECK(match(v11, dup, oracle).status == MatchStatus::Matched);

  // constant mismatch
  GuardedPattern c2{Pattern::make_const(Constant::make_int(2)), Guard::make_true()};
  CHECK(match(Value::make_const(Constant::make_int(1)), c2, oracle).status ==
        MatchStatus::Fail);

  // guard filters after binding
  GuardedPattern guarded{
      Pattern::make_var(sym("z")),
      Guard::make_is(BaseType::of(BaseKind::Atom), Expr::make_var(sym("z")))};
  CHECK(match(Value::make_const(Constant::make_int(1)), guarded, oracle).status ==
        MatchStatus::Fail);
  CHECK(match(Value::make_const(Constant::make_atom("ok")), guarded, oracle).status ==
        MatchStatus::Matched);

  // unresolvable guard subject
  GuardedPattern stuck{
      Pattern::make_wild(),
      Guard::make_is(BaseType::of(BaseKind::Int), Expr::make_var(sym("nowhere")))};
  CHECK(match(v12, stuck, oracle).status == MatchStatus::Stuck);
}

TEST_CASE("small steps") {
  OracleSource oracle(1);
  // (fun x -> x) 1 steps to 1
  auto id = Expr::make_abs(sym("x"), Expr::make_var(sym("x")));
  auto app = Expr::make_app(id, ci(1));
  StepResult r = step(nullptr, app, oracle);
  REQUIRE(r.status == StepStatus::Stepped);
  CHECK(r.next->kind == ExprKind::Const);

  // case 1 of 2 -> 'a; _ -> 'b end picks the second clause
  std::vector<Clause> clauses;
  clauses.push_back({{Pattern::make_const(Constant::make_int(2)), Guard::make_true()},
                     ca("a")});
  clauses.push_back({{Pattern::make_wild(), Guard::make_true()}, ca("b")});
  auto cse = Expr::make_case(ci(1), clauses);
  StepResult r2 = step(nullptr, cse, oracle);
  REQUIRE(r2.status == StepStatus::Stepped);
  CHECK(r2.next->constant.atom == sym("b"));

  // 1 2 is stuck
  StepResult r3 = step(nullptr, Expr::make_app(ci(1), ci(2)), oracle);
  CHECK(r3.status == StepStatus::Stuck);

  // case with no matching clause is stuck
  std::vector<Clause> only2;
  only2.push_back({{Pattern::make_const(Constant::make_int(2)), Guard::make_true()},
                   ca("a")});
  CHECK(step(nullptr, Expr::make_case(ci(1), only2), oracle).status ==
        StepStatus::Stuck);
}

TEST_CASE("evaluation") {
  // main = (fun x -> x) 'ok
  Module m;
  m.main = Expr::make_app(Expr::make_abs(sym("x"), Expr::make_var(sym("x"))), ca("ok"));
  OracleSource oracle(1);
  EvalResult r = eval(m, 1000, oracle);
  REQUIRE(r.status == EvalStatus::Value);
  CHECK(value_str(r.value) == "'ok");

  // letrec f = fun x -> f x in f 1 runs out of fuel
  Module loop;
  Definition f;
  f.name = sym("f");
  f.rhs = Expr::make_abs(
      sym("x"), Expr::make_app(Expr::make_var(sym("f")), Expr::make_var(sym("x"))));
  loop.defs.push_back(f);
  loop.main = Expr::make_app(Expr::make_var(sym("f")), ci(1));
  OracleSource o2(1);
  CHECK(eval(loop, 100, o2).status == EvalStatus::OutOfFuel);

  // mutually recursive definitions through the environment
  Module mm;
  Definition even, odd;
  // even = fun n -> case n of 0 -> 'true; _ -> odd (pred n)  — no arithmetic,
  // so model the countdown with nested pairs: n is 'z or {'s, n'}
  even.name = sym("even");
  {
    std::vector<Clause> cls;
    cls.push_back({{Pattern::make_const(Constant::make_atom("z")), Guard::make_true()},
                   ca("true")});
    cls.push_back(
        {{Pattern::make_pair(Pattern::make_wild(), Pattern::make_var(sym("n1"))),
          Guard::make_true()},
         Expr::make_app(Expr::make_var(sym("odd")), Expr::make_var(sym("n1")))});
    even.rhs = Expr::make_abs(sym("n"), Expr::make_case(Expr::make_var(sym("n")), cls));
  }
  odd.name = sym("odd");
  {
    std::vector<Clause> cls;
    cls.push_back({{Pattern::make_const(Constant::make_atom("z")), Guard::make_true()},
                   ca("false")});
    cls.push_back(
        {{Pattern::make_pair(Pattern::make_wild(), Pattern::make_var(sym("n1"))),
          Guard::make_true()},
         Expr::make_app(Expr::make_var(sym("even")), Expr::make_var(sym("n1")))});
    odd.rhs = Expr::make_abs(sym("n"), Expr::make_case(Expr::make_var(sym("n")), cls));
  }
  mm.defs = {even, odd};
  // even {'s,{'s,'z}} = 'true
  auto two = Expr::make_pair(ca("s"), Expr::make_pair(ca("s"), ca("z")));
  mm.main = Expr::make_app(Expr::make_var(sym("even")), two);
  OracleSource o3(1);
  EvalResult r3 = eval(mm, 1000, o3);
  REQUIRE(r3.status == EvalStatus::Value);
  CHECK(value_str(r3.value) == "'true");
}

TEST_CASE("oracle guards draw deterministically from the seed") {
  // main = case 'x of _ when oracle -> 1; _ -> 2 end
  auto make_main = [&]() {
    std::vector<Clause> cls;
    cls.push_back({{Pattern::make_wild(), Guard::make_oracle()}, ci(1)});
    cls.push_back({{Pattern::make_wild(), Guard::make_true()}, ci(2)});
    return Expr::make_case(ca("x"), cls);
  };
  Module m;
  m.main = make_main();
  std::string first;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    OracleSource a(seed), b(seed);
    EvalResult ra = eval(m, 100, a);
    EvalResult rb = eval(m, 100, b);
    REQUIRE(ra.status == EvalStatus::Value);
    REQUIRE(value_str(ra.value) == value_str(rb.value));
    if (seed == 0) first = value_str(ra.value);
  }
  // both outcomes occur across seeds
  bool saw_one = false, saw_two = false;
  for (uint64_t seed = 0; seed < 64; ++seed) {
    OracleSource o(seed);
    EvalResult r = eval(m, 100, o);
    if (value_str(r.value) == "1") saw_one = true;
    if (value_str(r.value) == "2") saw_two = true;
  }
  CHECK(saw_one);
  CHECK(saw_two);
}

TEST_CASE("closures capture their letrec environment") {
  // letrec k = fun x -> 'got in k  — the result is a closure
  Module m;
  Definition k;
  k.name = sym("k");
  k.rhs = Expr::make_abs(sym("x"), ca("got"));
  m.defs = {k};
  m.main = Expr::make_var(sym("k"));
  OracleSource o(1);
  EvalResult r = eval(m, 100, o);
  REQUIRE(r.status == EvalStatus::Value);
  CHECK(r.value->kind == ValueKind::Closure);
  CHECK(value_singleton(*(new TypeStore()), r.value) == std::nullopt);
}
