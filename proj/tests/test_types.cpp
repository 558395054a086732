#include <random>

#include "doctest.h"
#include "minerl/finite_model.hpp"
#include "minerl/subtype.hpp"
#include "minerl/types.hpp"

using namespace minerl;

TEST_CASE("interning is idempotent and canonical") {
  TypeStore store;
  CHECK(store.top() == store.top());
  TypeRef i1 = store.int_type();
  TypeRef i2 = store.int_type();
  CHECK(i1 == i2);
  size_t before = store.size();
  store.int_type();
  store.unite(store.int_type(), store.atom_type());
  size_t mid = store.size();
  store.unite(store.int_type(), store.atom_type());
  store.unite(store.atom_type(), store.int_type());  // order-insensitive
  CHECK(store.size() == mid);
  CHECK(mid >= before);
}

TEST_CASE("local normalization") {
  TypeStore store;
  TypeRef a = store.int_singleton(1);
  CHECK(store.unite(a, store.bottom()) == a);
  CHECK(store.unite(a, store.top()) == store.top());
  CHECK(store.intersect(a, store.top()) == a);
  CHECK(store.intersect(a, store.bottom()) == store.bottom());
  CHECK(store.unite(a, a) == a);
  CHECK(store.neg(store.neg(a)) == a);
  CHECK(store.neg(store.top()) == store.bottom());
  // flattening
  TypeRef u1 = store.unite(a, store.int_type());
  TypeRef u2 = store.unite(u1, store.atom_type());
  TypeRef u3 = store.unite(store.atom_type(), store.unite(store.int_type(), a));
  CHECK(u2 == u3);
}

TEST_CASE("dnf of simple combinations") {
  TypeStore store;
  TypeRef one = store.int_singleton(1);
  TypeRef t = store.intersect(store.int_type(), store.neg(one));
  const Dnf& d = store.dnf(t);
  REQUIRE(d.size() == 1);
  CHECK(d[0].pos == std::vector<TypeRef>{store.int_type()});
  CHECK(d[0].neg == std::vector<TypeRef>{one});

  TypeRef a = store.atom_singleton("a");
  TypeRef b = store.atom_singleton("b");
  TypeRef c = store.atom_singleton("c");
  const Dnf& d2 = store.dnf(store.intersect(store.unite(a, b), c));
  CHECK(d2.size() == 2);

  // De Morgan: !(a & b) has lines {!a}, {!b}
  const Dnf& d3 = store.dnf(store.neg(store.intersect(a, b)));
  REQUIRE(d3.size() == 2);
  CHECK(d3[0].pos.empty());
  CHECK(d3[1].pos.empty());
}

TEST_CASE("substitution distributes and handles plain types") {
  TypeStore store;
  TyVar alpha = store.fresh_var("a");
  TyVar beta = store.fresh_var("b");
  TypeRef va = store.var(alpha);
  TypeRef vb = store.var(beta);
  TypeSubst s{{alpha, store.int_type()}};
  CHECK(apply_subst(store, va, s) == store.int_type());
  CHECK(apply_subst(store, store.arrow(va, vb), s) ==
        store.arrow(store.int_type(), vb));
  CHECK(apply_subst(store, store.int_type(), s) == store.int_type());
  TypeRef u = store.unite(va, vb);
  CHECK(apply_subst(store, u, s) == store.unite(store.int_type(), vb));
}

namespace {

// type list(a) = 'nil | {a, list(a)}
TypeDecl list_decl() {
  Symbol a = intern_symbol("a");
  auto var_a = TypeExpr::make_name(a, {});
  auto nil = TypeExpr::make_base(BaseType::atom_singleton(intern_symbol("nil")));
  auto rec = TypeExpr::make_name(intern_symbol("list"), {var_a});
  auto pair = TypeExpr::make(TypeExprKind::Product, {var_a, rec});
  TypeDecl d;
  d.name = intern_symbol("list");
  d.params = {a};
  d.body = TypeExpr::make(TypeExprKind::Union, {nil, pair});
  return d;
}

}  // namespace

TEST_CASE("declare accepts the list equation and builds a cyclic graph") {
  TypeStore store;
  TypeDefs defs;
  auto errs = declare(store, {list_decl()}, defs);
  REQUIRE(errs.empty());
  auto list_int = defs.instantiate(store, intern_symbol("list"), {store.int_type()});
  REQUIRE(list_int.has_value());
  // Unfolding twice: 'nil | {int, 'nil | {int, list(int)}} with the inner
  // recursive handle equal to the outer one.
  const TypeNode& n = store.node(*list_int);
  REQUIRE(n.kind == TypeKind::Union);
  REQUIRE(n.kids.size() == 2);
  TypeRef nil = store.atom_singleton("nil");
  TypeRef prod = n.kids[0] == nil ? n.kids[1] : n.kids[0];
  const TypeNode& pn = store.node(prod);
  REQUIRE(pn.kind == TypeKind::Product);
  CHECK(pn.kids[0] == store.int_type());
  CHECK(pn.kids[1] == *list_int);

  // Same instantiation twice returns the same handle.
  auto again = defs.instantiate(store, intern_symbol("list"), {store.int_type()});
  CHECK(*again == *list_int);
}

TEST_CASE("declare rejects non-regular and non-contractive definitions") {
  // perfect(a) = a | perfect({a,a})
  {
    TypeStore store;
    TypeDefs defs;
    Symbol a = intern_symbol("a");
    auto var_a = TypeExpr::make_name(a, {});
    auto nested = TypeExpr::make(TypeExprKind::Product, {var_a, var_a});
    auto rec = TypeExpr::make_name(intern_symbol("perfect"), {nested});
    TypeDecl d;
    d.name = intern_symbol("perfect");
    d.params = {a};
    d.body = TypeExpr::make(TypeExprKind::Union, {var_a, rec});
    auto errs = declare(store, {d}, defs);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DeclErrorCode::NonRegular);
  }
  // t = t | t
  {
    TypeStore store;
    TypeDefs defs;
    auto rec = TypeExpr::make_name(intern_symbol("t"), {});
    TypeDecl d;
    d.name = intern_symbol("t");
    d.body = TypeExpr::make(TypeExprKind::Union, {rec, rec});
    auto errs = declare(store, {d}, defs);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DeclErrorCode::NonContractive);
  }
  // t = !t
  {
    TypeStore store;
    TypeDefs defs;
    auto rec = TypeExpr::make_name(intern_symbol("t"), {});
    TypeDecl d;
    d.name = intern_symbol("t");
    d.body = TypeExpr::make(TypeExprKind::Neg, {rec});
    auto errs = declare(store, {d}, defs);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DeclErrorCode::NonContractive);
  }
  // unknown name
  {
    TypeStore store;
    TypeDefs defs;
    TypeDecl d;
    d.name = intern_symbol("t2");
    d.body = TypeExpr::make_name(intern_symbol("mystery"), {});
    auto errs = declare(store, {d}, defs);
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].code == DeclErrorCode::UnknownName);
  }
}

TEST_CASE("substitution keeps recursive types cyclic") {
  TypeStore store;
  TypeDefs defs;
  REQUIRE(declare(store, {list_decl()}, defs).empty());
  TyVar alpha = store.fresh_var("a");
  auto list_a = defs.instantiate(store, intern_symbol("list"), {store.var(alpha)});
  REQUIRE(list_a.has_value());
  TypeRef onetwo = store.unite(store.int_singleton(1), store.int_singleton(2));
  TypeSubst s{{alpha, onetwo}};
  TypeRef subst = apply_subst(store, *list_a, s);
  // Unfold twice and compare handles.
  const TypeNode& n = store.node(subst);
  REQUIRE(n.kind == TypeKind::Union);
  TypeRef nil = store.atom_singleton("nil");
  TypeRef prod = n.kids[0] == nil ? n.kids[1] : n.kids[0];
  const TypeNode& pn = store.node(prod);
  REQUIRE(pn.kind == TypeKind::Product);
  CHECK(pn.kids[0] == onetwo);
  CHECK(pn.kids[1] == subst);
  // And semantically it matches the direct instantiation.
  auto direct = defs.instantiate(store, intern_symbol("list"), {onetwo});
  SubtypeCtx ctx(store);
  CHECK(ctx.is_subtype(subst, *direct));
  CHECK(ctx.is_subtype(*direct, subst));
}

TEST_CASE("free type variables") {
  TypeStore store;
  TyVar alpha = store.fresh_var("a");
  TyVar beta = store.fresh_var("b");
  CHECK(store.free_vars(store.int_type()).empty());
  auto fv = store.free_vars(store.arrow(store.var(alpha), store.var(beta)));
  CHECK(fv == std::vector<TyVar>{alpha, beta});
  TypeScheme s{{alpha}, store.arrow(store.var(alpha), store.var(beta))};
  CHECK(free_tyvars(store, s) == std::vector<TyVar>{beta});
}

TEST_CASE("dnf preserves meaning on the arrow-free fragment") {
  TypeStore store;
  SubtypeCtx ctx(store);
  Universe u = Universe::of({"a", "b"}, {0, 1, 2}, 2, true);
  std::mt19937 rng(314159);
  auto rand_type = [&](auto&& self, int depth) -> TypeRef {
    switch (rng() % 8) {
      case 0: return store.top();
      case 1: return store.bottom();
      case 2: return store.int_singleton((int64_t)(rng() % 3));
      case 3: return store.atom_singleton(rng() % 2 ? "a" : "b");
      case 4: return store.int_type();
      case 5:
        return depth > 0 ? store.product(self(self, depth - 1), self(self, depth - 1))
                         : store.any_pair();
      case 6:
        return store.unite(self(self, depth > 0 ? depth - 1 : 0),
                           self(self, depth > 0 ? depth - 1 : 0));
      default:
        return store.neg(self(self, depth > 0 ? depth - 1 : 0));
    }
  };
  for (int i = 0; i < 200; ++i) {
    TypeRef t = rand_type(rand_type, 2);
    // rebuild the type from its disjunctive normal form
    std::vector<TypeRef> lines;
    for (const DnfLine& line : store.dnf(t)) {
      std::vector<TypeRef> members;
      for (TypeRef p : line.pos) members.push_back(p);
      for (TypeRef n : line.neg) members.push_back(store.neg(n));
      lines.push_back(store.intersect(std::move(members)));
    }
    TypeRef rebuilt = store.unite(std::move(lines));
    REQUIRE(ctx.equiv(t, rebuilt));
    REQUIRE(subtype_oracle(store, t, rebuilt, u));
    REQUIRE(subtype_oracle(store, rebuilt, t, u));
  }
}
