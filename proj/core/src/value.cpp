#include "minerl/value.hpp"

namespace minerl {

EnvPtr EnvFrame::extend(EnvPtr parent, std::map<Symbol, ExprPtr> binds) {
  auto f = std::make_shared<EnvFrame>();
  f->parent = std::move(parent);
  f->binds = std::move(binds);
  return f;
}

const ExprPtr* EnvFrame::lookup(Symbol name) const {
  auto it = binds.find(name);
  if (it != binds.end()) return &it->second;
  return parent ? parent->lookup(name) : nullptr;
}

ValuePtr Value::make_const(Constant c) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Const;
  v->constant = std::move(c);
  return v;
}

ValuePtr Value::make_closure(Symbol param, ExprPtr body, EnvPtr env) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Closure;
  v->param = param;
  v->body = std::move(body);
  v->env = std::move(env);
  return v;
}

ValuePtr Value::make_pair(ValuePtr l, ValuePtr r) {
  auto v = std::make_shared<Value>();
  v->kind = ValueKind::Pair;
  v->left = std::move(l);
  v->right = std::move(r);
  return v;
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ValueKind::Const:
      return a->constant == b->constant;
    case ValueKind::Pair:
      return value_equal(a->left, b->left) && value_equal(a->right, b->right);
    case ValueKind::Closure:
      return false;
  }
  return false;
}

std::string value_str(const ValuePtr& v) {
  switch (v->kind) {
    case ValueKind::Const:
      return v->constant.str();
    case ValueKind::Closure:
      return "<fun>";
    case ValueKind::Pair:
      return "{" + value_str(v->left) + ", " + value_str(v->right) + "}";
  }
  return "?";
}

}  // namespace minerl
