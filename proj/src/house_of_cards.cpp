#include "regen/house_of_cards.hpp"

#include <algorithm>
#include <cmath>

namespace regen {

RhoTable rho_table(const ThresholdSchedule& schedule, int64_t horizon) {
  if (horizon < 1) throw Error("rho table horizon must be >= 1");
  const size_t n = size_t(horizon);

  RhoTable table;
  table.horizon = horizon;

  table.beta.resize(n + 1);
  double prod = 1.0;
  for (size_t m = 0; m <= n; ++m) {
    prod *= schedule.value(int64_t(m));
    table.beta[m] = prod;
  }

  table.first_return.assign(n + 1, 0.0);
  table.first_return[1] = 1.0 - schedule.value(0);
  for (size_t j = 2; j <= n; ++j)
    table.first_return[j] = table.beta[j - 2] * (1.0 - schedule.value(int64_t(j) - 1));

  // Exact O(N^2) renewal convolution; FFT would trade exactness for speed we
  // do not need at table scale.
  table.rho.assign(n + 1, 0.0);
  table.rho[0] = 1.0;
  for (size_t m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (size_t j = 1; j <= m; ++j)
      acc += table.first_return[j] * table.rho[m - j];
    table.rho[m] = acc;
  }
  return table;
}

std::vector<int64_t> simulate_w(int64_t m, int64_t n, const UniformField& field,
                                const ThresholdSchedule& schedule) {
  if (m > n) throw Error("simulate_w requires m <= n");

  // Thresholds by height, extended on demand; heights grow one per step so
  // the reachable range is bounded by the trajectory length.
  std::vector<double> by_height;
  const auto threshold = [&](int64_t h) {
    while (int64_t(by_height.size()) <= h)
      by_height.push_back(schedule.value(int64_t(by_height.size())));
    return by_height[size_t(h)];
  };

  const size_t steps = size_t(n - m);
  std::vector<double> u(steps);
  if (steps > 0) field.fill(m + 1, steps, u.data());

  std::vector<int64_t> w(steps + 1);
  w[0] = 0;
  for (size_t i = 0; i < steps; ++i)
    w[i + 1] = u[i] < threshold(w[i]) ? w[i] + 1 : 0;
  return w;
}

namespace {

double rho_sum(const ThresholdSchedule& schedule, int64_t from, int64_t count) {
  const int64_t horizon = std::max<int64_t>(1, from + count - 1);
  const RhoTable table = rho_table(schedule, horizon);
  double acc = 0.0;
  for (int64_t i = 0; i < count; ++i) acc += table.rho[size_t(from + i)];
  return acc;
}

}  // namespace

double tau_tail_bound(const ThresholdSchedule& schedule, int64_t s, int64_t t,
                      int64_t m) {
  if (s > t) throw Error("window requires s <= t");
  if (m < 0) throw Error("depth must be >= 0");
  return std::min(1.0, rho_sum(schedule, m, t - s + 1));
}

double impatience_bound(const ThresholdSchedule& schedule, int64_t s, int64_t t,
                        int64_t max_depth) {
  if (s > t) throw Error("window requires s <= t");
  if (max_depth < 1) throw Error("abort depth must be >= 1");
  const double sum = rho_sum(schedule, max_depth, t - s + 1);
  if (!(sum < 1.0))
    throw BoundVacuous("impatience sum " + std::to_string(sum) +
                       " is not below 1; raise the abort depth");
  return sum / (1.0 - sum);
}

double loss_of_memory_bound(const ThresholdSchedule& schedule, int64_t i,
                            int64_t s, int64_t t, double sup_norm) {
  if (s > t) throw Error("window requires s <= t");
  if (i > s) throw Error("conditioning time must satisfy i <= s");
  if (sup_norm < 0) throw Error("sup norm must be >= 0");
  if (sup_norm == 0.0) return 0.0;
  return 2.0 * sup_norm * rho_sum(schedule, s - i, t - s + 1);
}

RegimeReport regime_report(const ThresholdSchedule& schedule, int64_t kmax,
                           RegimeAssertion asserted) {
  if (kmax < 1) throw Error("kmax must be >= 1");

  RegimeReport report;
  report.kmax = kmax;
  report.asserted = asserted;

  double prod = 1.0;
  double sum = 0.0;
  for (int64_t m = 0; m <= kmax; ++m) {
    prod *= schedule.value(m);
    sum += prod;
  }
  report.beta_at_kmax = prod;
  report.beta_partial_sum = sum;

  const TailRule& tail = schedule.tail();
  if (std::holds_alternative<DegenerateOneTail>(tail) ||
      std::holds_alternative<GeometricTail>(tail)) {
    // Finitely many sub-1 factors, or sum_k (1 - a*_k) < infinity: the
    // product converges to a positive limit.
    report.beta_positive = true;
    report.sum_beta_diverges = true;
  } else if (const auto* p = std::get_if<PowerTail>(&tail)) {
    if (p->exponent > 1.0) {
      report.beta_positive = true;
      report.sum_beta_diverges = true;
    } else if (p->exponent == 1.0) {
      // beta_m decays like m^{-coeff}: summable exactly when coeff > 1.
      report.beta_positive = false;
      report.sum_beta_diverges = p->coeff <= 1.0;
    } else {
      // Stretched-exponential decay: summable, limit zero.
      report.beta_positive = false;
      report.sum_beta_diverges = false;
    }
  } else if (std::holds_alternative<ConstantTail>(tail)) {
    // Geometric decay of beta_m: summable, limit zero. Neither regime holds.
    report.beta_positive = false;
    report.sum_beta_diverges = false;
  }
  // NoTail / CustomTail: no analytic verdict.

  if (report.beta_positive.value_or(false))
    report.advisory = RegimeReport::Advisory::SemiInfiniteCandidate;
  else if (report.sum_beta_diverges.value_or(false))
    report.advisory = RegimeReport::Advisory::FiniteWindowCandidate;
  else
    report.advisory = RegimeReport::Advisory::Inconclusive;
  return report;
}

const char* to_string(RegimeAssertion a) {
  switch (a) {
    case RegimeAssertion::SumBetaDiverges: return "sum-beta-diverges";
    case RegimeAssertion::BetaPositive: return "beta-positive";
    case RegimeAssertion::Unasserted: return "unasserted";
  }
  return "unasserted";
}

const char* to_string(RegimeReport::Advisory a) {
  switch (a) {
    case RegimeReport::Advisory::FiniteWindowCandidate:
      return "finite-window-candidate";
    case RegimeReport::Advisory::SemiInfiniteCandidate:
      return "semi-infinite-candidate";
    case RegimeReport::Advisory::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace regen
