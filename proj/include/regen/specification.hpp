#pragma once

#include <limits>
#include <span>

#include "regen/alphabet.hpp"

namespace regen {

inline constexpr int64_t kUnboundedDepth = std::numeric_limits<int64_t>::max();

// Per-symbol conditional lower bounds a_k(g|w): given the k most recent
// symbols, a lower bound on the conditional probability of g under any past
// agreeing with w. Histories are most-recent-first everywhere:
// w[0] = w_{-1}, ..., w[k-1] = w_{-k}.
//
// Contract (property-tested, not enforced per call):
//   - depth monotonicity: minorant(k, g, w) <= minorant(k+1, g, w extended);
//   - sub-normalization: sum_g minorant(k, g, w) <= 1;
//   - dominance: sum_g minorant(k, g, w) >= a*_k of the paired schedule.
class SpecificationKernel {
 public:
  virtual ~SpecificationKernel() = default;

  virtual const Alphabet& alphabet() const = 0;

  virtual double minorant(int64_t k, Symbol g,
                          std::span<const Symbol> w) const = 0;

  virtual int64_t max_queryable_depth() const { return kUnboundedDepth; }
};

}  // namespace regen
