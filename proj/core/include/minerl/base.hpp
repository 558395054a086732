#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace minerl {

// Interned identifier (expression variables, atom names, type names).
using Symbol = uint32_t;

Symbol intern_symbol(std::string_view name);
const std::string& symbol_name(Symbol s);

// Type variables are plain ids allocated by the TypeStore; the id order is
// also the solving order used by tally.
using TyVar = uint32_t;

// Handle into the type store.
using TypeRef = uint32_t;

struct Span {
  uint32_t line = 0;
  uint32_t col = 0;
  bool valid() const { return line != 0; }
};

// Arbitrary-precision signed integer, sign + base-1e9 magnitude.
// Only the operations the type language needs: parsing, ordering,
// increment and small differences for range expansion.
class BigInt {
 public:
  BigInt() = default;
  BigInt(int64_t v);
  static BigInt parse(std::string_view text);  // [-]digits, must be well formed

  std::string str() const;
  size_t hash() const;

  int compare(const BigInt& o) const;  // <0, 0, >0
  bool operator==(const BigInt& o) const { return compare(o) == 0; }
  bool operator!=(const BigInt& o) const { return compare(o) != 0; }
  bool operator<(const BigInt& o) const { return compare(o) < 0; }
  bool operator<=(const BigInt& o) const { return compare(o) <= 0; }

  BigInt next() const;  // this + 1

  // o - this when the difference fits in uint64_t and is >= 0; otherwise
  // nullopt (used for the range-width check only).
  static bool small_distance(const BigInt& lo, const BigInt& hi, uint64_t limit,
                             uint64_t* out);

 private:
  bool negative_ = false;
  std::vector<uint32_t> digits_;  // little endian, base 1e9; empty == 0
  void normalize();
  static int mag_compare(const std::vector<uint32_t>& a,
                         const std::vector<uint32_t>& b);
};

enum class ConstKind : uint8_t { Int, Float, Atom };

// A literal constant. Ints and atoms are singleton-type eligible, floats
// are not.
struct Constant {
  ConstKind kind = ConstKind::Int;
  BigInt int_value;
  double float_value = 0.0;
  Symbol atom = 0;

  static Constant make_int(BigInt v);
  static Constant make_int(int64_t v) { return make_int(BigInt(v)); }
  static Constant make_float(double v);
  static Constant make_atom(Symbol a);
  static Constant make_atom(std::string_view a);

  bool operator==(const Constant& o) const;
  std::string str() const;
};

enum class BaseKind : uint8_t {
  IntSingleton,
  AtomSingleton,
  Int,
  Float,
  Atom,
  AnyPair,
  AnyFun,
};

struct BaseType {
  BaseKind kind = BaseKind::Int;
  BigInt int_value;  // IntSingleton
  Symbol atom = 0;   // AtomSingleton

  static BaseType int_singleton(BigInt v);
  static BaseType atom_singleton(Symbol a);
  static BaseType of(BaseKind k) { return BaseType{k, {}, 0}; }

  bool operator==(const BaseType& o) const;
  // Total order for canonical node sorting.
  int compare(const BaseType& o) const;
  size_t hash() const;
  std::string str() const;
};

// Base type assigned to a constant: singletons for ints and atoms, Float
// for floats.
BaseType type_of_constant(const Constant& c);

inline void hash_mix(size_t& seed, size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

}  // namespace minerl
