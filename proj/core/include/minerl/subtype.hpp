#pragma once

#include <optional>
#include <unordered_map>

#include "minerl/types.hpp"
#include "minerl/value.hpp"

namespace minerl {

// b1 <= b2 on base types: reflexive plus int/atom singletons below their
// carrier.
bool base_subtype(const BaseType& b1, const BaseType& b2);

// Top-level value kinds; the model splits into these disjoint worlds.
enum class World : uint8_t { Ints, Floats, Atoms, Pairs, Funs };
constexpr World kScalarWorlds[] = {World::Ints, World::Floats, World::Atoms};

// A DNF line split by atom shape. AnyPair spreads into the product side,
// AnyFun is tracked by flag.
struct LineParts {
  std::vector<TyVar> pos_vars, neg_vars;
  std::vector<BaseType> pos_scalar, neg_scalar;
  std::vector<std::pair<TypeRef, TypeRef>> pos_prod, neg_prod;
  std::vector<std::pair<TypeRef, TypeRef>> pos_arrow, neg_arrow;
  bool pos_any_fun = false;
  bool neg_any_fun = false;
  bool pos_any_pair = false;

  bool pos_excludes_scalars() const {
    return !pos_prod.empty() || pos_any_pair || !pos_arrow.empty() || pos_any_fun;
  }
  bool pos_excludes_pairs() const {
    return !pos_scalar.empty() || !pos_arrow.empty() || pos_any_fun;
  }
  bool pos_excludes_funs() const {
    return !pos_scalar.empty() || !pos_prod.empty() || pos_any_pair;
  }
  // A variable both positive and negative empties the line outright.
  bool vars_contradict() const;
};

LineParts split_line(TypeStore& store, const DnfLine& line);

// Emptiness of the scalar residue of a line in one world; exact because
// singleton carriers are infinite.
bool scalar_world_empty(World w, const LineParts& p);

// Emptiness and subtyping of set-theoretic types. A type is empty when its
// denotation is empty under every assignment of the type variables; queries
// share a verdict cache that never needs invalidation. Confine an instance
// to one thread of control.
class SubtypeCtx {
 public:
  explicit SubtypeCtx(TypeStore& store) : store_(store) {}

  TypeStore& store() { return store_; }

  bool is_empty(TypeRef t);
  bool is_subtype(TypeRef s, TypeRef t);
  bool equiv(TypeRef s, TypeRef t) { return is_subtype(s, t) && is_subtype(t, s); }
  TypeRef diff(TypeRef s, TypeRef t) { return store_.diff(s, t); }

  // Least component types of a pair type; nullopt when t is not below
  // {any, any}. Empty inputs project to none.
  std::optional<TypeRef> proj_left(TypeRef t) { return proj(t, true); }
  std::optional<TypeRef> proj_right(TypeRef t) { return proj(t, false); }

 private:
  static constexpr uint32_t kInf = 0xffffffffu;

  TypeStore& store_;
  std::unordered_map<TypeRef, bool> cache_;
  std::unordered_map<TypeRef, uint32_t> active_;

  bool empty_rec(TypeRef t, uint32_t& low);
  bool line_empty(const DnfLine& line, uint32_t& low);
  bool product_line_empty(TypeRef s, TypeRef t,
                          const std::vector<std::pair<TypeRef, TypeRef>>& negs,
                          size_t i, uint32_t& low);
  bool arrow_covered(TypeRef neg_dom, TypeRef neg_cod,
                     const std::vector<std::pair<TypeRef, TypeRef>>& pos,
                     TypeRef dom, TypeRef cod, size_t i, bool picked,
                     uint32_t& low);
  std::optional<TypeRef> proj(TypeRef t, bool left);
};

// Singleton type of a runtime value: int/atom constants map to their
// singletons, floats to float, pairs to products; closures have none.
std::optional<TypeRef> value_singleton(TypeStore& store, const ValuePtr& v);

}  // namespace minerl
