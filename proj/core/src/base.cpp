#include "minerl/base.hpp"

#include <cassert>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace minerl {

namespace {

struct SymbolTable {
  std::vector<std::string> names;
  std::unordered_map<std::string, Symbol> index;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

constexpr uint32_t kBase = 1000000000u;

}  // namespace

Symbol intern_symbol(std::string_view name) {
  auto& t = symbols();
  auto it = t.index.find(std::string(name));
  if (it != t.index.end()) return it->second;
  Symbol s = static_cast<Symbol>(t.names.size());
  t.names.emplace_back(name);
  t.index.emplace(t.names.back(), s);
  return s;
}

const std::string& symbol_name(Symbol s) {
  auto& t = symbols();
  assert(s < t.names.size());
  return t.names[s];
}

BigInt::BigInt(int64_t v) {
  negative_ = v < 0;
  uint64_t m = negative_ ? (~static_cast<uint64_t>(v) + 1) : static_cast<uint64_t>(v);
  while (m != 0) {
    digits_.push_back(static_cast<uint32_t>(m % kBase));
    m /= kBase;
  }
  normalize();
}

BigInt BigInt::parse(std::string_view text) {
  BigInt r;
  size_t i = 0;
  if (i < text.size() && text[i] == '-') {
    r.negative_ = true;
    ++i;
  }
  if (i >= text.size()) throw std::invalid_argument("empty integer literal");
  // Consume decimal digits from the least significant end in 9-digit limbs.
  size_t n = text.size();
  for (size_t end = n; end > i;) {
    size_t begin = end >= i + 9 ? end - 9 : i;
    uint32_t limb = 0;
    for (size_t k = begin; k < end; ++k) {
      if (text[k] < '0' || text[k] > '9')
        throw std::invalid_argument("bad integer literal");
      limb = limb * 10 + static_cast<uint32_t>(text[k] - '0');
    }
    r.digits_.push_back(limb);
    end = begin;
  }
  r.normalize();
  return r;
}

void BigInt::normalize() {
  while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
  if (digits_.empty()) negative_ = false;
}

std::string BigInt::str() const {
  if (digits_.empty()) return "0";
  std::string out;
  if (negative_) out.push_back('-');
  char buf[16];
  snprintf(buf, sizeof buf, "%u", digits_.back());
  out += buf;
  for (size_t i = digits_.size() - 1; i-- > 0;) {
    snprintf(buf, sizeof buf, "%09u", digits_[i]);
    out += buf;
  }
  return out;
}

size_t BigInt::hash() const {
  size_t h = negative_ ? 0x517cc1b727220a95ull : 0;
  for (uint32_t d : digits_) hash_mix(h, d);
  return h;
}

int BigInt::mag_compare(const std::vector<uint32_t>& a,
                        const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

int BigInt::compare(const BigInt& o) const {
  if (negative_ != o.negative_) return negative_ ? -1 : 1;
  int m = mag_compare(digits_, o.digits_);
  return negative_ ? -m : m;
}

BigInt BigInt::next() const {
  BigInt r = *this;
  if (!r.negative_) {
    uint32_t carry = 1;
    for (size_t i = 0; i < r.digits_.size() && carry; ++i) {
      r.digits_[i] += carry;
      carry = r.digits_[i] >= kBase ? 1 : 0;
      if (carry) r.digits_[i] -= kBase;
    }
    if (carry) r.digits_.push_back(1);
  } else {
    // Magnitude decreases by one; no borrow past the top since value < 0.
    uint32_t borrow = 1;
    for (size_t i = 0; i < r.digits_.size() && borrow; ++i) {
      if (r.digits_[i] == 0) {
        r.digits_[i] = kBase - 1;
      } else {
        r.digits_[i] -= 1;
        borrow = 0;
      }
    }
  }
  r.normalize();
  return r;
}

bool BigInt::small_distance(const BigInt& lo, const BigInt& hi, uint64_t limit,
                            uint64_t* out) {
  if (hi < lo) return false;
  // Walk from lo to hi; bail out past the limit. The limit is tiny (range
  // sugar caps at 1024), so this is fine.
  BigInt cur = lo;
  uint64_t dist = 0;
  while (cur != hi) {
    cur = cur.next();
    if (++dist > limit) return false;
  }
  *out = dist;
  return true;
}

Constant Constant::make_int(BigInt v) {
  Constant c;
  c.kind = ConstKind::Int;
  c.int_value = std::move(v);
  return c;
}

Constant Constant::make_float(double v) {
  Constant c;
  c.kind = ConstKind::Float;
  c.float_value = v;
  return c;
}

Constant Constant::make_atom(Symbol a) {
  Constant c;
  c.kind = ConstKind::Atom;
  c.atom = a;
  return c;
}

Constant Constant::make_atom(std::string_view a) {
  return make_atom(intern_symbol(a));
}

bool Constant::operator==(const Constant& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case ConstKind::Int: return int_value == o.int_value;
    case ConstKind::Float: return float_value == o.float_value;
    case ConstKind::Atom: return atom == o.atom;
  }
  return false;
}

std::string Constant::str() const {
  switch (kind) {
    case ConstKind::Int: return int_value.str();
    case ConstKind::Float: {
      char buf[64];
      snprintf(buf, sizeof buf, "%g", float_value);
      std::string s = buf;
      if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
          s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
      return s;
    }
    case ConstKind::Atom: return "'" + symbol_name(atom);
  }
  return "?";
}

BaseType BaseType::int_singleton(BigInt v) {
  BaseType b;
  b.kind = BaseKind::IntSingleton;
  b.int_value = std::move(v);
  return b;
}

BaseType BaseType::atom_singleton(Symbol a) {
  BaseType b;
  b.kind = BaseKind::AtomSingleton;
  b.atom = a;
  return b;
}

bool BaseType::operator==(const BaseType& o) const { return compare(o) == 0; }

int BaseType::compare(const BaseType& o) const {
  if (kind != o.kind) return kind < o.kind ? -1 : 1;
  switch (kind) {
    case BaseKind::IntSingleton: return int_value.compare(o.int_value);
    case BaseKind::AtomSingleton:
      return atom == o.atom ? 0 : (atom < o.atom ? -1 : 1);
    default: return 0;
  }
}

size_t BaseType::hash() const {
  size_t h = static_cast<size_t>(kind) * 0x9e3779b97f4a7c15ull;
  switch (kind) {
    case BaseKind::IntSingleton: hash_mix(h, int_value.hash()); break;
    case BaseKind::AtomSingleton: hash_mix(h, atom); break;
    default: break;
  }
  return h;
}

std::string BaseType::str() const {
  switch (kind) {
    case BaseKind::IntSingleton: return int_value.str();
    case BaseKind::AtomSingleton: return "'" + symbol_name(atom);
    case BaseKind::Int: return "int";
    case BaseKind::Float: return "float";
    case BaseKind::Atom: return "atom";
    case BaseKind::AnyPair: return "pair";
    case BaseKind::AnyFun: return "fun";
  }
  return "?";
}

BaseType type_of_constant(const Constant& c) {
  switch (c.kind) {
    case ConstKind::Int: return BaseType::int_singleton(c.int_value);
    case ConstKind::Atom: return BaseType::atom_singleton(c.atom);
    case ConstKind::Float: return BaseType::of(BaseKind::Float);
  }
  return BaseType::of(BaseKind::Float);
}

}  // namespace minerl
