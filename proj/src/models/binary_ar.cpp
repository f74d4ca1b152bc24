#include "regen/models/binary_ar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regen/errors.hpp"

namespace regen::models {

namespace {

constexpr int64_t kRemainderCacheSize = 256;
constexpr int64_t kEnumGuard = 26;       // 2^k enumeration cost ceiling
constexpr int64_t kPowerSumTerms = 1 << 17;

double pow_int_signed(double base, uint64_t e) {
  double acc = 1.0, b = base;
  while (e != 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

// Certified upper bound on sum_{m>k} m^{-e}: partial sum plus the integral
// tail over [J, inf). Overestimating is safe (thresholds only get lower);
// underestimating would break the minorant contract.
double power_tail_sum(double e, int64_t k) {
  const int64_t last = k + kPowerSumTerms;
  double acc = 0.0;
  for (int64_t m = last; m > k; --m)  // small terms first
    acc += std::pow(double(m), -e);
  return acc + std::pow(double(last), 1.0 - e) / (e - 1.0);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-2.0 * x)); }

double logistic_slope(double x) {
  const double c = std::cosh(x);
  return 0.5 / (c * c);
}

}  // namespace

BinaryARSpec::BinaryARSpec(Params p)
    : params_(std::move(p)), alphabet_({-1, +1}) {
  if (!std::isfinite(params_.theta0))
    throw InvalidSpecification("theta0 must be finite");
  for (double t : params_.theta)
    if (!std::isfinite(t))
      throw InvalidSpecification("theta coefficients must be finite");
  if (const auto* g = std::get_if<GeometricThetaTail>(&params_.tail)) {
    if (!std::isfinite(g->coeff) || !(std::abs(g->ratio) < 1.0) ||
        g->ratio == 0.0)
      throw InvalidSpecification(
          "geometric coefficient tail needs |ratio| in (0,1)");
  } else if (const auto* pw = std::get_if<PowerThetaTail>(&params_.tail)) {
    if (!std::isfinite(pw->coeff) || !(pw->exponent > 1.0))
      throw InvalidSpecification(
          "power coefficient tail needs exponent > 1 for summability");
  }
  if (const auto* cl = std::get_if<CustomLink>(&params_.link)) {
    if (!cl->q || !cl->derivative_extrema)
      throw InvalidSpecification(
          "custom link needs both q and a derivative-extrema routine");
  }
  if (params_.k_enum < 0 || params_.k_enum > kEnumGuard)
    throw InvalidSpecification("k_enum must lie in [0, " +
                               std::to_string(kEnumGuard) + "]");

  // Suffix sums of |theta| over the explicit list: suffix_abs_[k] covers
  // indices k+1 .. n.
  const int64_t n = int64_t(params_.theta.size());
  suffix_abs_.assign(size_t(n) + 1, 0.0);
  for (int64_t k = n - 1; k >= 0; --k)
    suffix_abs_[size_t(k)] =
        suffix_abs_[size_t(k + 1)] + std::abs(params_.theta[size_t(k)]);

  r_cache_.reserve(kRemainderCacheSize);
  for (int64_t k = 0; k < kRemainderCacheSize; ++k) {
    const double tail = tail_remainder(std::max(k, n));
    const double head = k < n ? suffix_abs_[size_t(k)] : 0.0;
    r_cache_.push_back(head + tail);
  }

  const double r0 = r_cache_[0];
  if (!std::isfinite(r0))
    throw InvalidSpecification("sum |theta_m| must be finite");
  if (std::holds_alternative<LinearLink>(params_.link) &&
      !(std::abs(params_.theta0) + r0 < 1.0))
    throw InvalidSpecification(
        "linear link needs |theta0| + sum |theta_m| < 1");

  const double lo = params_.theta0 - r0, hi = params_.theta0 + r0;
  if (std::holds_alternative<LinearLink>(params_.link)) {
    c_range_ = {0.5, 0.5};
  } else if (std::holds_alternative<LogisticLink>(params_.link)) {
    // q' = 1 / (2 cosh^2 x) peaks at 0 and decays in |x|.
    const double peak = std::clamp(0.0, lo, hi);
    c_range_ = {std::min(logistic_slope(lo), logistic_slope(hi)),
                logistic_slope(peak)};
  } else {
    c_range_ = std::get<CustomLink>(params_.link).derivative_extrema(lo, hi);
  }
  if (!(c_range_.first > 0.0) || !(c_range_.second >= c_range_.first) ||
      !std::isfinite(c_range_.second))
    throw InvalidSpecification("link derivative range must satisfy 0 < C- <= C+");

  // Pick or validate the switch depth k0.
  const double two_cp = 2.0 * c_range_.second;
  const auto admissible = [&](int64_t k) {
    return two_cp * remainder(k) < 1.0 &&
           (k == 0 || exact_level_mass(0) > 0.0);
  };
  if (params_.k0.has_value()) {
    k0_ = *params_.k0;
    if (k0_ < 0 || k0_ > params_.k_enum || !admissible(k0_))
      throw InfeasibleK0("k0 = " + std::to_string(k0_) +
                         " does not satisfy 2 C+ r_k0 < 1 with a positive "
                         "head within the enumeration budget");
  } else {
    int64_t k = 0;
    while (k <= params_.k_enum && !admissible(k)) ++k;
    if (k > params_.k_enum)
      throw InfeasibleK0(
          "no k0 within the enumeration budget brings 2 C+ r_k0 below 1");
    k0_ = k;
  }

  // Head: exact masses (capped) below k0, derivative bound up to the point
  // where the analytic tail law takes over.
  const double cap = 1.0 - two_cp * remainder(k0_);
  const int64_t head_len = std::max(k0_, n);
  std::vector<double> head;
  head.reserve(size_t(head_len));
  bool saturated = false;
  for (int64_t k = 0; k < head_len; ++k) {
    const double v = k < k0_ ? std::min(exact_level_mass(k), cap)
                             : 1.0 - two_cp * remainder(k);
    if (v >= 1.0) {  // double saturation; everything beyond is 1 as well
      saturated = true;
      break;
    }
    head.push_back(v);
  }

  TailRule rule{DegenerateOneTail{}};
  if (!saturated) {
    if (const auto* g = std::get_if<GeometricThetaTail>(&params_.tail)) {
      // 2 C+ r_k = [2 C+ |c| |g|/(1-|g|)] |g|^k for k >= n.
      const double ar = std::abs(g->ratio);
      const double c2 = two_cp * std::abs(g->coeff) * ar / (1.0 - ar);
      if (c2 > 0.0)
        rule = GeometricTail{c2, ar};
    } else if (const auto* pw = std::get_if<PowerThetaTail>(&params_.tail)) {
      const double ac = std::abs(pw->coeff);
      const double e = pw->exponent;
      if (ac > 0.0)
        rule = CustomTail{[two_cp, ac, e](int64_t k) {
                            return 1.0 - two_cp * ac * power_tail_sum(e, k);
                          },
                          1.0};
    }
  }

  // Rounding repair, always downward: a lower threshold is still dominated
  // by the kernel; a raised one might not be.
  if (!head.empty()) {
    const double first_tail = std::visit(
        [&](const auto& t) -> double {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, DegenerateOneTail>)
            return 1.0;
          else if constexpr (std::is_same_v<T, GeometricTail>)
            return 1.0 - t.coeff * pow_int_signed(t.ratio, uint64_t(head_len));
          else if constexpr (std::is_same_v<T, CustomTail>)
            return t.fn(head_len);
          else
            return 1.0;
        },
        rule);
    head.back() = std::min(head.back(), first_tail);
    for (int64_t k = int64_t(head.size()) - 2; k >= 0; --k)
      head[size_t(k)] = std::min(head[size_t(k)], head[size_t(k + 1)]);
  }

  schedule_ = ThresholdSchedule(std::move(head), std::move(rule));
}

double BinaryARSpec::theta_at(int64_t m) const {
  if (m < 1) throw Error("theta index starts at 1");
  const int64_t n = int64_t(params_.theta.size());
  if (m <= n) return params_.theta[size_t(m - 1)];
  if (const auto* g = std::get_if<GeometricThetaTail>(&params_.tail))
    return g->coeff * pow_int_signed(g->ratio, uint64_t(m));
  if (const auto* pw = std::get_if<PowerThetaTail>(&params_.tail))
    return pw->coeff * std::pow(double(m), -pw->exponent);
  return 0.0;
}

double BinaryARSpec::tail_remainder(int64_t k) const {
  // sum_{m>k} |theta_m| for k >= list size, from the analytic law.
  if (const auto* g = std::get_if<GeometricThetaTail>(&params_.tail)) {
    const double ar = std::abs(g->ratio);
    return std::abs(g->coeff) * pow_int_signed(ar, uint64_t(k + 1)) /
           (1.0 - ar);
  }
  if (const auto* pw = std::get_if<PowerThetaTail>(&params_.tail))
    return std::abs(pw->coeff) * power_tail_sum(pw->exponent, k);
  return 0.0;
}

double BinaryARSpec::remainder(int64_t k) const {
  if (k < 0) throw Error("remainder index must be non-negative");
  if (k < int64_t(r_cache_.size())) return r_cache_[size_t(k)];
  const int64_t n = int64_t(params_.theta.size());
  if (std::holds_alternative<std::monostate>(params_.tail) && k >= n)
    return 0.0;
  const double head = k < n ? suffix_abs_[size_t(k)] : 0.0;
  return head + tail_remainder(std::max(k, n));
}

double BinaryARSpec::link_value(double x) const {
  if (std::holds_alternative<LinearLink>(params_.link))
    return (1.0 + x) / 2.0;
  if (std::holds_alternative<LogisticLink>(params_.link)) return logistic(x);
  return std::get<CustomLink>(params_.link).q(x);
}

double BinaryARSpec::minorant(int64_t k, Symbol g,
                              std::span<const Symbol> w) const {
  // Successive depths sharpen the bound in exact arithmetic, and the layered
  // partition requires the resulting increments to be non-negative. Rounding
  // in the accumulated sums can tip a raw depth-k value an ulp below its
  // predecessor, so return the running maximum over depths instead: a prefix
  // accumulates identically no matter which depth the call asks for, which
  // makes monotonicity exact rather than approximate.
  double s = params_.theta0;
  double best = g == +1 ? link_value(s - remainder(0))
                        : 1.0 - link_value(s + remainder(0));
  for (int64_t m = 1; m <= k; ++m) {
    s += theta_at(m) * double(w[size_t(m - 1)]);
    const double r = remainder(m);
    const double v = g == +1 ? link_value(s - r) : 1.0 - link_value(s + r);
    best = std::max(best, v);
  }
  return std::clamp(best, 0.0, 1.0);
}

double BinaryARSpec::exact_level_mass(int64_t k) const {
  if (k < 0) throw Error("level index must be non-negative");
  const double r = remainder(k);
  if (std::holds_alternative<LinearLink>(params_.link))
    return 1.0 - r;  // q(s+r) - q(s-r) = r for every history
  if (k > params_.k_enum)
    throw Error("exact level mass at depth " + std::to_string(k) +
                " exceeds the enumeration budget");
  double worst = 2.0;
  for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
    double s = params_.theta0;
    for (int64_t m = 1; m <= k; ++m)
      s += theta_at(m) * ((mask >> (m - 1)) & 1 ? 1.0 : -1.0);
    // Same summand shapes the layered partition accumulates.
    const double mass = (1.0 - link_value(s + r)) + link_value(s - r);
    worst = std::min(worst, mass);
  }
  return worst;
}

}  // namespace regen::models
