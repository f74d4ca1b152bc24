#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "regen/alphabet.hpp"
#include "regen/schedule.hpp"
#include "regen/specification.hpp"

namespace regen::models {

// Coefficients past the explicit list, by magnitude law. Index m is absolute
// (theta_m for m > list size). The remainder sums r_k they induce are exact
// for the geometric law and certified upper bounds for the power law.
struct GeometricThetaTail {
  double coeff = 0.0;  // theta_m = coeff * ratio^m
  double ratio = 0.5;  // |ratio| in (0,1); negative alternates signs
};

struct PowerThetaTail {
  double coeff = 0.0;     // theta_m = coeff * m^{-exponent}
  double exponent = 2.0;  // > 1 so that sum |theta| converges
};

using ThetaTail =
    std::variant<std::monostate, GeometricThetaTail, PowerThetaTail>;

struct LinearLink {};    // q(x) = (1 + x) / 2, needs |theta0| + r_0 < 1
struct LogisticLink {};  // q(x) = 1 / (1 + e^{-2x})

// User-defined strictly increasing C^1 link. The extrema routine must return
// {min q', max q'} over a closed interval; the dominance guarantees of the
// derived schedule are only as good as these bounds.
struct CustomLink {
  std::function<double(double)> q;
  std::function<std::pair<double, double>(double, double)> derivative_extrema;
};

using Link = std::variant<LinearLink, LogisticLink, CustomLink>;

// Binary chain on {-1,+1} with conditional law
//   P(+1 | past w) = q(theta0 + sum_{m>=1} theta_m w_{-m}).
// Depth-k lower bounds come from pushing the unseen tail to its worst case:
//   a_k(+1|w) = q(s_k(w) - r_k),   a_k(-1|w) = 1 - q(s_k(w) + r_k),
// with s_k the truncated field and r_k = sum_{m>k} |theta_m|.
class BinaryARSpec : public SpecificationKernel {
 public:
  struct Params {
    double theta0 = 0.0;
    std::vector<double> theta;  // theta_1 .. theta_n
    ThetaTail tail{};           // coefficients for m > n
    Link link = LinearLink{};
    // Depth where the schedule switches from exact enumeration to the
    // derivative bound 1 - 2 C+ r_k. Auto-selected (smallest admissible)
    // when unset; admissible means 2 C+ r_{k0} < 1 and a positive head.
    std::optional<int64_t> k0{};
    int64_t k_enum = 16;  // enumeration budget: exact masses need 2^k terms
  };

  explicit BinaryARSpec(Params p);

  const Alphabet& alphabet() const override { return alphabet_; }
  double minorant(int64_t k, Symbol g,
                  std::span<const Symbol> w) const override;

  // theta_m for m >= 1, from the list or the tail law.
  double theta_at(int64_t m) const;
  // r_k = sum_{m>k} |theta_m|; never underestimates the true remainder.
  double remainder(int64_t k) const;
  double link_value(double x) const;
  // {min, max} of q' over [theta0 - r_0, theta0 + r_0].
  std::pair<double, double> derivative_range() const { return c_range_; }
  // Smallest conditional mass left uncovered at depth k by any history:
  // min over all 2^k sign patterns of sum_g a_k(g|w). Costs 2^k link calls.
  double exact_level_mass(int64_t k) const;

  int64_t chosen_k0() const { return k0_; }
  const Params& params() const { return params_; }
  const ThresholdSchedule& schedule() const { return schedule_; }

 private:
  double tail_remainder(int64_t k) const;  // analytic part, k >= n

  Params params_;
  Alphabet alphabet_;
  std::vector<double> suffix_abs_;  // suffix sums of |theta| over the list
  std::pair<double, double> c_range_;
  int64_t k0_ = 0;
  std::vector<double> r_cache_;  // r_0 .. r_255 precomputed
  ThresholdSchedule schedule_{{}, DegenerateOneTail{}};
};

}  // namespace regen::models
