#pragma once

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "minerl/base.hpp"

namespace minerl {

struct Expr;
struct Pattern;
struct Guard;
using ExprPtr = std::shared_ptr<const Expr>;
using PatternPtr = std::shared_ptr<const Pattern>;
using GuardPtr = std::shared_ptr<const Guard>;

enum class PatternKind : uint8_t { Const, Wild, Var, Pair };

struct Pattern {
  PatternKind kind;
  Constant constant;      // Const
  Symbol var = 0;         // Var
  PatternPtr left, right;  // Pair
  Span span;

  static PatternPtr make_const(Constant c, Span s = {});
  static PatternPtr make_wild(Span s = {});
  static PatternPtr make_var(Symbol v, Span s = {});
  static PatternPtr make_pair(PatternPtr l, PatternPtr r, Span s = {});
};

enum class GuardKind : uint8_t { Is, And, True, Oracle };

// Source-level guards test variables only; the interpreter substitutes
// values in, which is why the subject is a full expression here.
struct Guard {
  GuardKind kind;
  BaseType base;     // Is
  ExprPtr subject;   // Is
  GuardPtr lhs, rhs;  // And
  Span span;

  static GuardPtr make_is(BaseType b, ExprPtr subject, Span s = {});
  static GuardPtr make_and(GuardPtr l, GuardPtr r, Span s = {});
  static GuardPtr make_true(Span s = {});
  static GuardPtr make_oracle(Span s = {});
};

struct GuardedPattern {
  PatternPtr pattern;
  GuardPtr guard;  // a bare pattern carries guard `true`
};

struct Clause {
  GuardedPattern guarded_pattern;
  ExprPtr body;
};

// Annotation scheme attached to a definition. `members` keeps the arrow
// members of the intersection in source order, which the per-member check
// and branch reports rely on.
struct AnnotatedScheme {
  std::vector<TyVar> quantified;
  TypeRef body = 0;
  std::vector<TypeRef> members;
};

struct Definition {
  Symbol name = 0;
  std::optional<AnnotatedScheme> annotation;
  ExprPtr rhs;  // always an abstraction
  Span span;
};

enum class ExprKind : uint8_t { Var, Const, Abs, App, Pair, Case, Letrec };

struct Expr {
  ExprKind kind;
  Symbol var = 0;                    // Var, Abs param
  Constant constant;                 // Const
  ExprPtr child1, child2;            // Abs body / App fn,arg / Pair l,r / Case scrutinee / Letrec body (child1)
  std::vector<Clause> clauses;       // Case
  std::vector<Definition> defs;      // Letrec
  Span span;

  static ExprPtr make_var(Symbol v, Span s = {});
  static ExprPtr make_const(Constant c, Span s = {});
  static ExprPtr make_abs(Symbol param, ExprPtr body, Span s = {});
  static ExprPtr make_app(ExprPtr fn, ExprPtr arg, Span s = {});
  static ExprPtr make_pair(ExprPtr l, ExprPtr r, Span s = {});
  static ExprPtr make_case(ExprPtr scrutinee, std::vector<Clause> clauses, Span s = {});
  static ExprPtr make_letrec(std::vector<Definition> defs, ExprPtr body, Span s = {});
};

std::set<Symbol> free_vars(const ExprPtr& e);
std::set<Symbol> bound_vars(const PatternPtr& p);

// Variables tested by the guard (the subjects of `is` tests).
std::set<Symbol> guard_vars(const GuardPtr& g);
bool guard_has_oracle(const GuardPtr& g);

// True when some variable occurs more than once in the pattern; such a
// match can fail on values of the pattern's shape (component equality).
bool pattern_is_nonlinear(const PatternPtr& p);

// True when the pattern contains a float constant. Floats have no singleton
// types, so such a pattern matches by equality on more values than its
// pattern type can express.
bool pattern_has_float_constant(const PatternPtr& p);

bool alpha_equiv(const ExprPtr& a, const ExprPtr& b);

}  // namespace minerl
