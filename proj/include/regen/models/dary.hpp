#pragma once

#include <cstdint>
#include <vector>

#include "regen/engine.hpp"
#include "regen/schedule.hpp"
#include "regen/specification.hpp"
#include "regen/uniform_field.hpp"

namespace regen::models {

// A point of [0,1) known to resolution base^-resolution through its most
// recent digits: X = sum_{j=1..resolution} digit_{-j} base^{-j}, carried as
// the interval [X, X + base^-resolution).
struct DaryState {
  int64_t base = 2;
  int64_t resolution = 0;
  std::vector<int64_t> digits;  // most recent first
  // Fresh from dary_state this is the interval's left endpoint; under
  // dary_step it follows the exact map (g + X)/base, which stays inside the
  // shifted window's interval (they agree up to width()).
  double point = 0.0;

  double width() const;
};

// Build a state from digits (most recent first); validates digit range.
DaryState dary_state(int64_t base, std::vector<int64_t> digits);

// One step of the interval map: the new point is (g + X) / base, and g
// becomes the most recent digit (the oldest one falls off the window).
DaryState dary_step(const DaryState& state, int64_t g);

// Perfect sample of the stationary chain's marginal at finite resolution:
// an engine window [-resolution, -1] of the digit process, mapped to its
// interval. The digit kernel's alphabet must be exactly {0..D-1}.
DaryState dary_perfect_marginal(const SpecificationKernel& digit_spec,
                                const ThresholdSchedule& schedule,
                                int64_t resolution, uint64_t seed,
                                int64_t max_depth);

}  // namespace regen::models
