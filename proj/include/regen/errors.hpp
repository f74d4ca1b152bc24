#pragma once

#include <stdexcept>
#include <string>

namespace regen {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite schedule with no continuation rule cannot classify this uniform.
struct ScheduleExhausted : Error {
  using Error::Error;
};

// The minorants fail their promised lower bound against the schedule: after
// building every admissible level, the uniform was still not covered.
struct DominanceViolation : Error {
  using Error::Error;
};

// Requested bound is >= 1 before normalization; raising the abort depth is
// the only fix.
struct BoundVacuous : Error {
  using Error::Error;
};

// No admissible truncation index exists within the exact-enumeration budget.
struct InfeasibleK0 : Error {
  using Error::Error;
};

// Coefficient remainders are not computable: the coefficient list is not
// finite and no tail rule was supplied.
struct TailUnavailable : Error {
  using Error::Error;
};

// The induced context chain has no unique stationary law.
struct ReducibleChain : Error {
  using Error::Error;
};

struct InvalidSpecification : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace regen
