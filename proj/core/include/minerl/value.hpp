#pragma once

#include <map>
#include <memory>

#include "minerl/ast.hpp"

namespace minerl {

struct EnvFrame;
using EnvPtr = std::shared_ptr<const EnvFrame>;

// letrec environment; values of definitions are their (abstraction) terms.
struct EnvFrame {
  EnvPtr parent;
  std::map<Symbol, ExprPtr> binds;

  static EnvPtr extend(EnvPtr parent, std::map<Symbol, ExprPtr> binds);
  const ExprPtr* lookup(Symbol name) const;
};

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

enum class ValueKind : uint8_t { Const, Closure, Pair };

struct Value {
  ValueKind kind;
  Constant constant;   // Const
  Symbol param = 0;    // Closure
  ExprPtr body;        // Closure
  EnvPtr env;          // Closure: letrec environment at capture
  ValuePtr left, right;  // Pair

  static ValuePtr make_const(Constant c);
  static ValuePtr make_closure(Symbol param, ExprPtr body, EnvPtr env);
  static ValuePtr make_pair(ValuePtr l, ValuePtr r);
};

// Structural equality of runtime values; closures compare unequal.
bool value_equal(const ValuePtr& a, const ValuePtr& b);

std::string value_str(const ValuePtr& v);

using ValueSubst = std::map<Symbol, ValuePtr>;

}  // namespace minerl
