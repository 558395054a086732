#include "minerl/finite_model.hpp"

#include <cassert>

#include "minerl/subtype.hpp"

namespace minerl {

Universe Universe::of(std::vector<std::string> atoms, std::vector<int64_t> ints,
                      uint32_t depth, bool with_float) {
  Universe u;
  for (const auto& a : atoms) u.atoms.push_back(intern_symbol(a));
  for (int64_t i : ints) u.ints.emplace_back(i);
  u.include_float = with_float;
  u.max_depth = depth;
  return u;
}

namespace {

std::vector<ValuePtr> universe_constants(const Universe& u) {
  assert(!u.atoms.empty() && !u.ints.empty());
  std::vector<ValuePtr> consts;
  for (Symbol a : u.atoms) consts.push_back(Value::make_const(Constant::make_atom(a)));
  for (const BigInt& i : u.ints)
    consts.push_back(Value::make_const(Constant::make_int(i)));
  if (u.include_float)
    consts.push_back(Value::make_const(Constant::make_float(0.5)));
  return consts;
}

}  // namespace

std::vector<ValuePtr> enumerate_universe(const Universe& u) {
  std::vector<ValuePtr> level = universe_constants(u);
  for (uint32_t d = 0; d < u.max_depth; ++d) {
    std::vector<ValuePtr> next = universe_constants(u);
    for (const ValuePtr& l : level)
      for (const ValuePtr& r : level) next.push_back(Value::make_pair(l, r));
    level = std::move(next);
  }
  return level;
}

bool model_member(TypeStore& store, const ValuePtr& v, TypeRef t) {
  const TypeNode& n = store.node(t);
  switch (n.kind) {
    case TypeKind::Top:
      return true;
    case TypeKind::Bottom:
      return false;
    case TypeKind::Union:
      for (TypeRef k : n.kids)
        if (model_member(store, v, k)) return true;
      return false;
    case TypeKind::Inter:
      for (TypeRef k : n.kids)
        if (!model_member(store, v, k)) return false;
      return true;
    case TypeKind::Neg:
      return !model_member(store, v, n.kids[0]);
    case TypeKind::Base:
      if (n.base.kind == BaseKind::AnyFun) return false;  // surrogate model
      switch (v->kind) {
        case ValueKind::Const: {
          BaseType cb = type_of_constant(v->constant);
          return base_subtype(cb, n.base);
        }
        case ValueKind::Pair:
          return n.base.kind == BaseKind::AnyPair;
        case ValueKind::Closure:
          return false;
      }
      return false;
    case TypeKind::Product:
      return v->kind == ValueKind::Pair &&
             model_member(store, v->left, n.kids[0]) &&
             model_member(store, v->right, n.kids[1]);
    case TypeKind::Arrow:
      throw FiniteModelUnsupported("arrow types are outside the finite model");
    case TypeKind::Var:
      throw FiniteModelUnsupported("type variables are outside the finite model");
    case TypeKind::Hole:
      assert(false && "hole reached the finite model");
      return false;
  }
  return false;
}

std::vector<ValuePtr> denote(TypeStore& store, TypeRef t, const Universe& u) {
  std::vector<ValuePtr> out;
  for (const ValuePtr& v : enumerate_universe(u))
    if (model_member(store, v, t)) out.push_back(v);
  return out;
}

// ---------------------------------------------------------------------------
// Bitset denotations. Values of level k are indexed as: constants first,
// then pair (i, j) of level-(k-1) values at nc + i*size(k-1) + j.

namespace {

using Bits = std::vector<uint64_t>;

struct BitsetModel {
  TypeStore& store;
  std::vector<Constant> consts;
  std::vector<size_t> level_size;

  BitsetModel(TypeStore& s, const Universe& u) : store(s) {
    for (Symbol a : u.atoms) consts.push_back(Constant::make_atom(a));
    for (const BigInt& i : u.ints) consts.push_back(Constant::make_int(i));
    if (u.include_float) consts.push_back(Constant::make_float(0.5));
    level_size.push_back(consts.size());
    for (uint32_t d = 1; d <= u.max_depth; ++d) {
      size_t prev = level_size.back();
      level_size.push_back(consts.size() + prev * prev);
    }
  }

  static Bits zeros(size_t nbits) { return Bits((nbits + 63) / 64, 0); }

  static Bits ones(size_t nbits) {
    Bits b((nbits + 63) / 64, ~0ull);
    if (nbits % 64) b.back() = (~0ull) >> (64 - nbits % 64);
    return b;
  }

  static void bor(Bits& a, const Bits& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] |= b[i];
  }
  static void band(Bits& a, const Bits& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] &= b[i];
  }
  static void bnot(Bits& a, size_t nbits) {
    for (auto& w : a) w = ~w;
    if (nbits % 64) a.back() &= (~0ull) >> (64 - nbits % 64);
  }
  static bool get(const Bits& a, size_t i) { return (a[i >> 6] >> (i & 63)) & 1; }
  static void set(Bits& a, size_t i) { a[i >> 6] |= 1ull << (i & 63); }

  // dest |= src << offset (bitwise), src is nbits long.
  static void or_shifted(Bits& dest, size_t offset, const Bits& src, size_t nbits) {
    size_t word = offset >> 6, shift = offset & 63;
    size_t src_words = (nbits + 63) / 64;
    for (size_t i = 0; i < src_words; ++i) {
      uint64_t w = src[i];
      dest[word + i] |= w << shift;
      if (shift && word + i + 1 < dest.size()) dest[word + i + 1] |= w >> (64 - shift);
    }
  }

  Bits den(TypeRef t, uint32_t level) {
    const TypeNode& n = store.node(t);
    size_t sz = level_size[level];
    switch (n.kind) {
      case TypeKind::Top:
        return ones(sz);
      case TypeKind::Bottom:
        return zeros(sz);
      case TypeKind::Union: {
        Bits acc = zeros(sz);
        for (TypeRef k : n.kids) {
          Bits kb = den(k, level);
          bor(acc, kb);
        }
        return acc;
      }
      case TypeKind::Inter: {
        Bits acc = ones(sz);
        for (TypeRef k : n.kids) {
          Bits kb = den(k, level);
          band(acc, kb);
        }
        return acc;
      }
      case TypeKind::Neg: {
        Bits b = den(n.kids[0], level);
        bnot(b, sz);
        return b;
      }
      case TypeKind::Base: {
        Bits b = zeros(sz);
        if (n.base.kind == BaseKind::AnyFun) return b;
        if (n.base.kind == BaseKind::AnyPair) {
          for (size_t i = consts.size(); i < sz; ++i) set(b, i);
          return b;
        }
        for (size_t i = 0; i < consts.size(); ++i) {
          if (base_subtype(type_of_constant(consts[i]), n.base)) set(b, i);
        }
        return b;
      }
      case TypeKind::Product: {
        Bits b = zeros(sz);
        if (level == 0) return b;
        size_t prev = level_size[level - 1];
        Bits l = den(n.kids[0], level - 1);
        Bits r = den(n.kids[1], level - 1);
        for (size_t i = 0; i < prev; ++i) {
          if (get(l, i)) or_shifted(b, consts.size() + i * prev, r, prev);
        }
        return b;
      }
      case TypeKind::Arrow:
        throw FiniteModelUnsupported("arrow types are outside the finite model");
      case TypeKind::Var:
        throw FiniteModelUnsupported("type variables are outside the finite model");
      case TypeKind::Hole:
        assert(false && "hole reached the finite model");
        return zeros(sz);
    }
    return zeros(sz);
  }
};

}  // namespace

bool subtype_oracle(TypeStore& store, TypeRef s, TypeRef t, const Universe& u) {
  BitsetModel m(store, u);
  Bits ds = m.den(s, u.max_depth);
  Bits dt = m.den(t, u.max_depth);
  for (size_t i = 0; i < ds.size(); ++i) {
    if (ds[i] & ~dt[i]) return false;
  }
  return true;
}

}  // namespace minerl
