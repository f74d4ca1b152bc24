#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regen/schedule.hpp"
#include "regen/uniform_field.hpp"

namespace regen {

// Numerics of the auxiliary height chain: from height x it climbs to x+1
// when the next uniform is below a*_x and falls to 0 otherwise. Its returns
// to 0 control regeneration depth, so every quantitative bound ships from
// here.
struct RhoTable {
  int64_t horizon = 0;               // N
  std::vector<double> beta;          // beta[m] = prod_{k<=m} a*_k, m in [0,N]
  std::vector<double> first_return;  // f[j] = P(first return at step j); f[0]=0
  std::vector<double> rho;           // rho[m] = P(back at 0 after m steps)
};

// Climb-then-reset first-return weights f_1 = 1-a*_0, f_j = beta_{j-2}
// (1-a*_{j-1}), convolved by the renewal recursion rho_m = sum_j f_j
// rho_{m-j}. Validated against the Monte-Carlo chain before acceptance.
RhoTable rho_table(const ThresholdSchedule& schedule, int64_t horizon);

// Exact trajectory W_m..W_n (W_m = 0) driven by the shared indexed field:
// W_q = (W_{q-1}+1) when U_q < a*_{W_{q-1}}, else 0.
std::vector<int64_t> simulate_w(int64_t m, int64_t n, const UniformField& field,
                                const ThresholdSchedule& schedule);

// P(s - tau[s,t] > m) <= sum_{i=0}^{t-s} rho_{m+i}, clamped to [0,1].
double tau_tail_bound(const ThresholdSchedule& schedule, int64_t s, int64_t t,
                      int64_t m);

// Bias bound S/(1-S) with S = sum_{i=0}^{t-s} rho_{M+i} for abort depth M.
// Throws BoundVacuous when S >= 1.
double impatience_bound(const ThresholdSchedule& schedule, int64_t s, int64_t t,
                        int64_t max_depth);

// Influence of the past at or before time i on the window [s,t]:
// 2 * sup_norm * sum_{j=0}^{t-s} rho_{s+j-i}.
double loss_of_memory_bound(const ThresholdSchedule& schedule, int64_t i,
                            int64_t s, int64_t t, double sup_norm);

enum class RegimeAssertion { SumBetaDiverges, BetaPositive, Unasserted };

// Regime diagnostics are advisory: divergence of sum beta_m is a tail fact no
// finite computation decides, so the analytic verdicts come from the
// schedule's declared tail rule and the user's assertion is echoed back.
struct RegimeReport {
  int64_t kmax = 0;
  double beta_partial_sum = 0.0;  // sum_{m<=kmax} beta_m
  double beta_at_kmax = 0.0;
  std::optional<bool> sum_beta_diverges;  // unset: undecidable from the rule
  std::optional<bool> beta_positive;
  enum class Advisory {
    FiniteWindowCandidate,
    SemiInfiniteCandidate,
    Inconclusive,
  };
  Advisory advisory = Advisory::Inconclusive;
  RegimeAssertion asserted = RegimeAssertion::Unasserted;
};

RegimeReport regime_report(const ThresholdSchedule& schedule, int64_t kmax,
                           RegimeAssertion asserted = RegimeAssertion::Unasserted);

const char* to_string(RegimeAssertion a);
const char* to_string(RegimeReport::Advisory a);

}  // namespace regen
