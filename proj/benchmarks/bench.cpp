#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "minerl/finite_model.hpp"
#include "minerl/parser.hpp"

using namespace minerl;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(MINERL_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypeRef random_type(TypeStore& store, std::mt19937& rng, int depth) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  switch (pick(8)) {
    case 0: return store.top();
    case 1: return store.int_singleton(pick(4));
    case 2: return store.atom_singleton(pick(2) ? "a" : "b");
    case 3: return store.int_type();
    case 4:
      if (depth > 0)
        return store.product(random_type(store, rng, depth - 1),
                             random_type(store, rng, depth - 1));
      return store.any_pair();
    case 5:
      return store.unite(random_type(store, rng, depth > 0 ? depth - 1 : 0),
                         random_type(store, rng, depth > 0 ? depth - 1 : 0));
    case 6:
      return store.neg(random_type(store, rng, depth > 0 ? depth - 1 : 0));
    default:
      if (depth > 0)
        return store.arrow(random_type(store, rng, depth - 1),
                           random_type(store, rng, depth - 1));
      return store.any_fun();
  }
}

void BM_subtype_random(benchmark::State& state) {
  TypeStore store;
  SubtypeCtx ctx(store);
  std::mt19937 rng(42);
  std::vector<std::pair<TypeRef, TypeRef>> pairs;
  for (int i = 0; i < 256; ++i)
    pairs.emplace_back(random_type(store, rng, 3), random_type(store, rng, 3));
  size_t i = 0;
  for (auto _ : state) {
    auto& [s, t] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(ctx.is_subtype(s, t));
  }
}
BENCHMARK(BM_subtype_random);

void BM_subtype_list_unfold(benchmark::State& state) {
  TypeStore store;
  SubtypeCtx warm(store);
  TypeDefs defs;
  Symbol a = intern_symbol("a");
  auto var_a = TypeExpr::make_name(a, {});
  auto nil = TypeExpr::make_base(BaseType::atom_singleton(intern_symbol("nil")));
  TypeDecl d;
  d.name = intern_symbol("list");
  d.params = {a};
  d.body = TypeExpr::make(
      TypeExprKind::Union,
      {nil, TypeExpr::make(TypeExprKind::Product,
                           {var_a, TypeExpr::make_name(d.name, {var_a})})});
  declare(store, {d}, defs);
  TypeRef l1 = *defs.instantiate(store, d.name, {store.int_singleton(1)});
  TypeRef lint = *defs.instantiate(store, d.name, {store.int_type()});
  for (auto _ : state) {
    SubtypeCtx ctx(store);  // cold caches each round
    benchmark::DoNotOptimize(ctx.is_subtype(l1, lint));
  }
}
BENCHMARK(BM_subtype_list_unfold);

void BM_check_corpus_small(benchmark::State& state) {
  std::string text = slurp("safe_div.mei");
  for (auto _ : state) {
    TypeStore store;
    SubtypeCtx ctx(store);
    ParseResult pr = parse(store, {"safe_div.mei", text});
    benchmark::DoNotOptimize(check_module(ctx, *pr.module).ok());
  }
}
BENCHMARK(BM_check_corpus_small);

void BM_check_filtermap(benchmark::State& state) {
  std::string text = slurp("filtermap.mei");
  for (auto _ : state) {
    TypeStore store;
    SubtypeCtx ctx(store);
    ParseResult pr = parse(store, {"filtermap.mei", text});
    benchmark::DoNotOptimize(check_module(ctx, *pr.module).ok());
  }
}
BENCHMARK(BM_check_filtermap);

void BM_oracle_depth2(benchmark::State& state) {
  TypeStore store;
  std::mt19937 rng(7);
  Universe u = Universe::of({"a", "b", "nil"}, {0, 1, 2, 3}, 2, true);
  std::vector<std::pair<TypeRef, TypeRef>> pairs;
  for (int i = 0; i < 64; ++i) {
    TypeRef s = random_type(store, rng, 2);
    TypeRef t = random_type(store, rng, 2);
    pairs.emplace_back(s, t);
  }
  size_t i = 0;
  for (auto _ : state) {
    auto& [s, t] = pairs[i++ % pairs.size()];
    try {
      benchmark::DoNotOptimize(subtype_oracle(store, s, t, u));
    } catch (const FiniteModelUnsupported&) {
    }
  }
}
BENCHMARK(BM_oracle_depth2);

}  // namespace

BENCHMARK_MAIN();
