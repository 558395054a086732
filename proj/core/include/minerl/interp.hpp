#pragma once

#include <optional>

#include "minerl/module.hpp"
#include "minerl/value.hpp"

namespace minerl {

// Deterministic stream of oracle outcomes, replayable from its seed.
class OracleSource {
 public:
  explicit OracleSource(uint64_t seed) : state_(seed * 2654435761u + 0x9e3779b9u) {}
  bool next() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return (state_ >> 33) & 1;
  }

 private:
  uint64_t state_;
};

bool value_matches_base(const ValuePtr& v, const BaseType& b);

enum class MatchStatus : uint8_t { Matched, Fail, Stuck };

struct MatchResult {
  MatchStatus status = MatchStatus::Fail;
  ValueSubst binds;
};

// Matches a value against a guarded pattern. Duplicate pattern variables
// require equal components; the guard runs after the pattern bound its
// variables. Stuck means a guard subject did not resolve to a value.
MatchResult match(const ValuePtr& v, const GuardedPattern& pg, OracleSource& oracle);

enum class StepStatus : uint8_t {
  Stepped,
  Normal,  // a value, possibly under letrec wrappers
  Stuck,
};

struct StepResult {
  StepStatus status;
  ExprPtr next;     // Stepped
  ExprPtr offender;  // Stuck
};

bool is_value_term(const ExprPtr& e);

// One reduction step under the letrec environment (leftmost-innermost,
// call by value).
StepResult step(const EnvPtr& env, const ExprPtr& e, OracleSource& oracle);

enum class EvalStatus : uint8_t { Value, Stuck, OutOfFuel };

struct EvalResult {
  EvalStatus status;
  ValuePtr value;    // Value
  ExprPtr offender;  // Stuck
  uint64_t steps = 0;
};

EvalResult eval_expr(const ExprPtr& e, uint64_t fuel, OracleSource& oracle);
EvalResult eval(const Module& m, uint64_t fuel, OracleSource& oracle);

}  // namespace minerl
