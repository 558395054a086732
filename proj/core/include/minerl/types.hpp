#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "minerl/base.hpp"

namespace minerl {

enum class TypeKind : uint8_t {
  Top,
  Bottom,
  Union,
  Inter,
  Neg,
  Arrow,
  Product,
  Var,
  Base,
  Hole,  // under construction; only seen while a recursive graph is being tied
};

struct TypeNode {
  TypeKind kind = TypeKind::Top;
  std::vector<TypeRef> kids;  // Union/Inter members (sorted), Neg child, Arrow dom/cod, Product left/right
  TyVar var = 0;
  BaseType base;

  bool operator==(const TypeNode& o) const;
  size_t hash() const;
};

struct DnfLine {
  std::vector<TypeRef> pos;  // sorted atom refs (Base, Product, Arrow, Var nodes)
  std::vector<TypeRef> neg;
  bool operator==(const DnfLine& o) const { return pos == o.pos && neg == o.neg; }
  bool operator<(const DnfLine& o) const {
    return pos != o.pos ? pos < o.pos : neg < o.neg;
  }
};

using Dnf = std::vector<DnfLine>;

// tyvar -> type; ordered for determinism.
using TypeSubst = std::map<TyVar, TypeRef>;

struct TypeScheme {
  std::vector<TyVar> quantified;  // sorted
  TypeRef body = 0;
  bool is_mono() const { return quantified.empty(); }
};

// Interning table for regular, contractive set-theoretic types. Handles are
// stable; nodes are immutable once their construction (including recursive
// tying) is complete. Confine to one thread or synchronize externally.
class TypeStore {
 public:
  TypeStore();

  TypeRef top() const { return top_; }
  TypeRef bottom() const { return bottom_; }

  TypeRef base(const BaseType& b);
  TypeRef int_singleton(BigInt v) { return base(BaseType::int_singleton(std::move(v))); }
  TypeRef int_singleton(int64_t v) { return base(BaseType::int_singleton(BigInt(v))); }
  TypeRef atom_singleton(std::string_view name) {
    return base(BaseType::atom_singleton(intern_symbol(name)));
  }
  TypeRef int_type() { return base(BaseType::of(BaseKind::Int)); }
  TypeRef float_type() { return base(BaseType::of(BaseKind::Float)); }
  TypeRef atom_type() { return base(BaseType::of(BaseKind::Atom)); }
  TypeRef any_pair() { return base(BaseType::of(BaseKind::AnyPair)); }
  TypeRef any_fun() { return base(BaseType::of(BaseKind::AnyFun)); }
  TypeRef constant(const Constant& c) { return base(type_of_constant(c)); }

  TypeRef var(TyVar v);
  TypeRef arrow(TypeRef dom, TypeRef cod);
  TypeRef product(TypeRef left, TypeRef right);
  TypeRef neg(TypeRef t);
  TypeRef unite(std::vector<TypeRef> members);
  TypeRef unite(TypeRef a, TypeRef b) { return unite(std::vector<TypeRef>{a, b}); }
  TypeRef intersect(std::vector<TypeRef> members);
  TypeRef intersect(TypeRef a, TypeRef b) { return intersect(std::vector<TypeRef>{a, b}); }
  TypeRef diff(TypeRef a, TypeRef b) { return intersect(a, neg(b)); }

  // Generic entry point; normalizes per kind. Idempotent.
  TypeRef intern(const TypeNode& node);

  const TypeNode& node(TypeRef r) const { return nodes_[r]; }
  size_t size() const { return nodes_.size(); }

  TyVar fresh_var(std::string hint);
  size_t var_count() const { return var_names_.size(); }
  const std::string& var_name(TyVar v) const { return var_names_[v]; }

  // Recursive graph construction: allocate a placeholder, then tie the knot.
  TypeRef make_hole();
  void patch(TypeRef hole, TypeRef content);

  const Dnf& dnf(TypeRef t);
  const std::vector<TyVar>& free_vars(TypeRef t);

  bool is_atom_node(TypeRef t) const;

 private:
  std::vector<TypeNode> nodes_;
  std::unordered_map<size_t, std::vector<TypeRef>> table_;  // hash -> candidates
  std::vector<std::string> var_names_;
  std::unordered_map<TypeRef, Dnf> dnf_cache_;
  std::unordered_map<TypeRef, std::vector<TyVar>> fv_cache_;
  TypeRef top_ = 0, bottom_ = 0;

  TypeRef lookup_or_insert(TypeNode node);
  void dnf_of(TypeRef t, Dnf& out);
};

std::vector<TyVar> free_tyvars(TypeStore& store, TypeRef t);
std::vector<TyVar> free_tyvars(TypeStore& store, const TypeScheme& s);

TypeRef apply_subst(TypeStore& store, TypeRef t, const TypeSubst& subst);
TypeRef scheme_body_instantiated(TypeStore& store, const TypeScheme& s,
                                 const TypeSubst& inst);

// ---------------------------------------------------------------------------
// Syntactic type expressions (produced by the parser, consumed by declare
// and annotation lowering).

struct TypeExpr;
using TypeExprPtr = std::shared_ptr<const TypeExpr>;

enum class TypeExprKind : uint8_t {
  Any,
  None,
  Union,
  Inter,
  Neg,
  Arrow,
  Product,
  Base,
  Name,   // identifier: a bound type variable or a declared constructor
};

struct TypeExpr {
  TypeExprKind kind;
  BaseType base;                    // Base
  Symbol name = 0;                  // Name
  std::vector<TypeExprPtr> args;    // Name application / Union / Inter members / Neg / Arrow / Product children
  Span span;

  static TypeExprPtr make(TypeExprKind k, std::vector<TypeExprPtr> args, Span s = {});
  static TypeExprPtr make_base(BaseType b, Span s = {});
  static TypeExprPtr make_name(Symbol n, std::vector<TypeExprPtr> args, Span s = {});
};

struct TypeDecl {
  Symbol name = 0;
  std::vector<Symbol> params;
  TypeExprPtr body;
  Span span;
};

enum class DeclErrorCode : uint8_t {
  NonRegular,
  NonContractive,
  UnknownName,
  BadArity,
  DuplicateName,
};

struct DeclError {
  DeclErrorCode code;
  Span span;
  std::string message;
};

// Declared type constructors; instantiation substitutes the parameters.
class TypeDefs {
 public:
  struct Ctor {
    std::vector<TyVar> params;
    TypeRef body = 0;
  };

  bool has(Symbol name) const { return ctors_.count(name) != 0; }
  const Ctor* find(Symbol name) const;
  std::optional<TypeRef> instantiate(TypeStore& store, Symbol name,
                                     const std::vector<TypeRef>& args) const;
  void add(Symbol name, Ctor ctor) { ctors_[name] = std::move(ctor); }

  const std::map<Symbol, Ctor>& all() const { return ctors_; }

  // Instantiations already built, newest last; the pretty printer uses this
  // to spell recursive graphs by name.
  const std::map<std::pair<Symbol, std::vector<TypeRef>>, TypeRef>& instances() const {
    return inst_cache_;
  }

 private:
  std::map<Symbol, Ctor> ctors_;
  mutable std::map<std::pair<Symbol, std::vector<TypeRef>>, TypeRef> inst_cache_;
};

std::vector<DeclError> declare(TypeStore& store, const std::vector<TypeDecl>& decls,
                               TypeDefs& defs);

// Lowers a syntactic type; `vars` maps bound identifiers to type variables,
// everything else must resolve through `defs`.
struct LowerResult {
  TypeRef type = 0;
  std::vector<DeclError> errors;
  bool ok() const { return errors.empty(); }
};
LowerResult lower_type(TypeStore& store, const TypeDefs& defs,
                       const std::map<Symbol, TyVar>& vars, const TypeExprPtr& te);

}  // namespace minerl
