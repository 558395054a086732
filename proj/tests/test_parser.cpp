#include <fstream>

#include "doctest.h"
#include "minerl/parser.hpp"
#include "minerl/pretty.hpp"
#include "minerl/subtype.hpp"

using namespace minerl;

namespace {

ParseResult parse_text(TypeStore& store, const std::string& text) {
  return parse(store, SourceFile{"<test>", text});
}

}  // namespace

TEST_CASE("a small module parses") {
  TypeStore store;
  ParseResult r = parse_text(store, R"(
type pairlist(a) = 'nil | {{a, a}, pairlist(a)};

def id : forall a. a -> a = fun x -> x;
def swap : forall a b. {a, b} -> {b, a} =
  fun p -> case p of {x, y} -> {y, x} end;
main = swap {1, 'one};
)");
  REQUIRE(r.ok());
  const Module& m = *r.module;
  CHECK(m.defs.size() == 2);
  CHECK(m.main != nullptr);
  CHECK(m.defs[0].annotation.has_value());
  CHECK(m.defs[0].annotation->quantified.size() == 1);
  CHECK(m.type_defs.has(intern_symbol("pairlist")));
  CHECK(m.type_defs.has(intern_symbol("list")));  // builtin injected
}

TEST_CASE("tuple, range and list sugar") {
  TypeStore store;
  ParseResult r = parse_text(store, R"(
def f : {1, 2, 3} -> 1..3 -> [int] -> int = fun t n l -> 0;
)");
  REQUIRE(r.ok());
  const AnnotatedScheme& ann = *r.module->defs[0].annotation;
  const TypeNode& arrow1 = store.node(ann.members[0]);
  REQUIRE(arrow1.kind == TypeKind::Arrow);
  // {1,2,3} becomes {3, {1, {2, 3}}}
  TypeRef tuple = arrow1.kids[0];
  CHECK(tuple == store.product(store.int_singleton(3),
                               store.product(store.int_singleton(1),
                                             store.product(store.int_singleton(2),
                                                           store.int_singleton(3)))));
  // 1..3 becomes 1|2|3
  const TypeNode& arrow2 = store.node(arrow1.kids[1]);
  CHECK(arrow2.kids[0] == store.unite({store.int_singleton(1), store.int_singleton(2),
                                       store.int_singleton(3)}));
  // [int] is the builtin list instance
  const TypeNode& arrow3 = store.node(arrow2.kids[1]);
  SubtypeCtx ctx(store);
  TypeRef li = arrow3.kids[0];
  TypeRef unfolded = store.unite(store.atom_singleton("nil"),
                                 store.product(store.int_type(), li));
  CHECK(ctx.equiv(li, unfolded));

  // expression and pattern tuples follow the same encoding
  ParseResult r2 = parse_text(store, R"(
def g : any -> int = fun t -> case {1, 2, 3} of {a, b, c} -> b; _ -> 0 end;
)");
  REQUIRE(r2.ok());
}

TEST_CASE("wide ranges are rejected") {
  TypeStore store;
  ParseResult r = parse_text(store, "def f : 0..5000 -> int = fun x -> 1;\n");
  CHECK(!r.ok());
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics[0].message.find("range") != std::string::npos);
}

TEST_CASE("declaration errors surface with their codes") {
  TypeStore store;
  ParseResult r = parse_text(store, "type perfect(a) = a | perfect({a, a});\n");
  CHECK(!r.ok());
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics[0].code == "non-regular");

  TypeStore store2;
  ParseResult r2 = parse_text(store2, "type t = t | t;\n");
  CHECK(!r2.ok());
  CHECK(r2.diagnostics[0].code == "non-contractive");

  TypeStore store3;
  ParseResult r3 = parse_text(store3, "type u = mystery;\n");
  CHECK(!r3.ok());
  CHECK(r3.diagnostics[0].code == "unknown-name");
}

TEST_CASE("guards only accept variables as subjects") {
  TypeStore store;
  ParseResult r = parse_text(
      store, "def f : int -> int = fun x -> case x of _ when is int 1 -> 1 end;\n");
  CHECK(!r.ok());
}

TEST_CASE("binders are renamed apart") {
  TypeStore store;
  ParseResult r = parse_text(store, R"(
def f : int -> int -> int = fun x -> fun x -> x;
)");
  REQUIRE(r.ok());
  const ExprPtr& outer = r.module->defs[0].rhs;
  REQUIRE(outer->kind == ExprKind::Abs);
  REQUIRE(outer->child1->kind == ExprKind::Abs);
  CHECK(outer->var != outer->child1->var);
  // the body refers to the inner binder
  CHECK(outer->child1->child1->var == outer->child1->var);
}

TEST_CASE("spans point into the source") {
  TypeStore store;
  ParseResult r = parse_text(store, "def f :\n  int -> atom = fun x -> x;\n");
  REQUIRE(r.ok());
  CHECK(r.module->defs[0].span.line == 1);
}

TEST_CASE("parse then print is idempotent on the corpus") {
  const char* files[] = {
      "last_day_precise.mei", "last_day_coarse.mei", "safe_div.mei",
      "safe_div_alt.mei",     "tree.mei",            "tree_bad.mei",
      "filtermap.mei",        "pretty_ty.mei",       "exhaustiveness_bad.mei",
      "dead_branch.mei",      "poly_tree.mei",
  };
  for (const char* f : files) {
    CAPTURE(f);
    std::ifstream in(std::string(MINERL_CORPUS_DIR) + "/" + f);
    REQUIRE(in.good());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    TypeStore store;
    ParseResult r1 = parse(store, {f, text});
    REQUIRE(r1.ok());
    std::string printed = print_module(store, *r1.module);

    TypeStore store2;
    ParseResult r2 = parse(store2, {f, printed});
    CAPTURE(printed);
    REQUIRE(r2.ok());
    std::string printed2 = print_module(store2, *r2.module);
    REQUIRE(printed == printed2);

    // alpha-equivalence of the expression structure
    REQUIRE(r1.module->defs.size() == r2.module->defs.size());
    for (size_t i = 0; i < r1.module->defs.size(); ++i) {
      REQUIRE(alpha_equiv(r1.module->defs[i].rhs, r2.module->defs[i].rhs));
    }
    if (r1.module->main) {
      REQUIRE(r2.module->main);
      REQUIRE(alpha_equiv(r1.module->main, r2.module->main));
    }
  }
}

TEST_CASE("type arguments parse on the command line path") {
  TypeStore store;
  TypeDefs defs;
  std::map<Symbol, TyVar> vars;
  std::vector<Diagnostic> diags;
  auto t1 = parse_type_text(store, defs, "1|2", vars, diags);
  auto t2 = parse_type_text(store, defs, "int", vars, diags);
  REQUIRE(t1);
  REQUIRE(t2);
  SubtypeCtx ctx(store);
  CHECK(ctx.is_subtype(*t1, *t2));
  // free identifiers become shared type variables
  auto s1 = parse_type_text(store, defs, "a -> a", vars, diags);
  auto s2 = parse_type_text(store, defs, "a", vars, diags);
  REQUIRE(s1);
  REQUIRE(s2);
  CHECK(store.free_vars(*s1) == store.free_vars(*s2));
}

TEST_CASE("mutually recursive type declarations") {
  TypeStore store;
  ParseResult r = parse_text(store, R"(
type forest(x) = 'fnil | {tree2(x), forest(x)};
type tree2(y) = {'leaf, y} | {'node, forest(y)};
def f : tree2(int) -> int = fun t -> 0;
)");
  REQUIRE(r.ok());
  SubtypeCtx ctx(store);
  Symbol tree2 = intern_symbol("tree2");
  TypeRef t_int = *r.module->type_defs.instantiate(store, tree2, {store.int_type()});
  TypeRef t_12 = *r.module->type_defs.instantiate(
      store, tree2, {store.unite(store.int_singleton(1), store.int_singleton(2))});
  CHECK(ctx.is_subtype(t_12, t_int));
  CHECK(!ctx.is_subtype(t_int, t_12));
  CHECK(ctx.is_subtype(store.product(store.atom_singleton("leaf"), store.int_type()),
                       t_int));
  CHECK(!ctx.is_empty(t_int));

  // a mutual group where one member twists the parameters is not regular
  TypeStore store2;
  ParseResult bad = parse_text(store2, R"(
type p(x) = 'p | q({x, x});
type q(y) = 'q | p(y);
)");
  CHECK(!bad.ok());
  REQUIRE(!bad.diagnostics.empty());
  CHECK(bad.diagnostics[0].code == "non-regular");
}
