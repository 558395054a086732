#pragma once

#include <stdexcept>

#include "minerl/types.hpp"
#include "minerl/value.hpp"

namespace minerl {

// Finite surrogate model for the arrow-free, variable-free type fragment.
// Ground truth for subtyping tests; AnyFun denotes the empty set here.
struct Universe {
  std::vector<Symbol> atoms;  // nonempty
  std::vector<BigInt> ints;   // nonempty
  bool include_float = false;
  uint32_t max_depth = 0;  // pair-nesting bound

  static Universe of(std::vector<std::string> atoms, std::vector<int64_t> ints,
                     uint32_t depth, bool with_float = false);
};

struct FiniteModelUnsupported : std::runtime_error {
  explicit FiniteModelUnsupported(const std::string& what)
      : std::runtime_error(what) {}
};

// All constants of the universe plus all pairs of enumerated values, level
// by level up to max_depth. Intended for small universes.
std::vector<ValuePtr> enumerate_universe(const Universe& u);

bool model_member(TypeStore& store, const ValuePtr& v, TypeRef t);

std::vector<ValuePtr> denote(TypeStore& store, TypeRef t, const Universe& u);

// denote(s) ⊆ denote(t), computed on bitset denotations so that the
// depth-3 acceptance universe stays cheap.
bool subtype_oracle(TypeStore& store, TypeRef s, TypeRef t, const Universe& u);

}  // namespace minerl
