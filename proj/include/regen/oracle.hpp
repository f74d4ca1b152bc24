#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "regen/models/finite_order.hpp"
#include "regen/schedule.hpp"
#include "regen/specification.hpp"

namespace regen::oracle {

// Stationary law of the context chain induced by a finite-order
// specification, obtained by a direct linear solve. No simulation involved.
struct StationaryLaw {
  int64_t order = 0;
  std::vector<double> probabilities;  // indexed by context code
  double residual = 0.0;              // max-norm invariance defect
};

// Solves pi T = pi, sum pi = 1 over the |G|^order context codes.
// Throws ReducibleChain when the solve does not pin down a unique law.
StationaryLaw exact_stationary(const models::FiniteOrderSpec& spec);

// Law of the most recent symbol under a context law; requires order >= 1.
std::vector<double> symbol_marginal(const StationaryLaw& law,
                                    size_t alphabet_size);

// Literal transcription of the sampling map: find the regeneration time by
// checking every uniform in the window against the threshold definition,
// then rebuild symbols level by level with fresh minorant evaluations.
// Intentionally naive and sharing no code path with the engine; agreement
// with it is the whole point. Returns the symbols on [s, t], or nullopt when
// the supplied uniforms do not reach far enough back to certify a
// regeneration time.
std::optional<std::vector<Symbol>> brute_force_phi(
    const std::map<int64_t, double>& u, const SpecificationKernel& spec,
    const ThresholdSchedule& schedule, int64_t s, int64_t t);

struct DistributionComparison {
  double distance = 0.0;        // total variation
  double standard_error = 0.0;  // summed per-cell binomial error bar
  bool pass = false;            // distance <= tolerance
};

// Empirical cell counts against reference cell probabilities, indexed the
// same way. Requires at least 1000 samples so the error bar means something.
DistributionComparison compare_distributions(std::span<const int64_t> counts,
                                             std::span<const double> reference,
                                             double tolerance);

}  // namespace regen::oracle
