#include "regen/models/dary.hpp"

#include <algorithm>
#include <string>

#include "regen/errors.hpp"

namespace regen::models {

namespace {

// Horner evaluation oldest digit first: X = (d_{-1} + (d_{-2} + ...)/D)/D.
// The same divide-and-add shape as dary_step, so stepping and rebuilding
// from the window agree to the last bit whenever the base is a power of 2.
double point_of(const std::vector<int64_t>& digits, int64_t base) {
  double x = 0.0;
  for (size_t j = digits.size(); j > 0; --j)
    x = (double(digits[j - 1]) + x) / double(base);
  return x;
}

void check_digit(int64_t g, int64_t base) {
  if (g < 0 || g >= base)
    throw InvalidSpecification("digit " + std::to_string(g) +
                               " outside base " + std::to_string(base));
}

}  // namespace

double DaryState::width() const {
  double w = 1.0;
  for (int64_t j = 0; j < resolution; ++j) w /= double(base);
  return w;
}

DaryState dary_state(int64_t base, std::vector<int64_t> digits) {
  if (base < 2) throw InvalidSpecification("base must be at least 2");
  for (int64_t g : digits) check_digit(g, base);
  DaryState s;
  s.base = base;
  s.resolution = int64_t(digits.size());
  s.digits = std::move(digits);
  s.point = point_of(s.digits, base);
  return s;
}

DaryState dary_step(const DaryState& state, int64_t g) {
  check_digit(g, state.base);
  DaryState next = state;
  if (!next.digits.empty()) {
    next.digits.pop_back();
    next.digits.insert(next.digits.begin(), g);
  }
  next.point = (double(g) + state.point) / double(state.base);
  return next;
}

DaryState dary_perfect_marginal(const SpecificationKernel& digit_spec,
                                const ThresholdSchedule& schedule,
                                int64_t resolution, uint64_t seed,
                                int64_t max_depth) {
  if (resolution < 1)
    throw InvalidSpecification("resolution must be at least 1");
  const Alphabet& a = digit_spec.alphabet();
  const int64_t base = int64_t(a.size());
  for (int64_t g = 0; g < base; ++g)
    if (!a.contains(Symbol(g)))
      throw InvalidSpecification(
          "digit process alphabet must be exactly 0..D-1");

  UniformField field(seed);
  const auto ws =
      sample_window(-resolution, -1, field, digit_spec, schedule, max_depth);
  auto digits = std::vector<int64_t>(size_t(resolution));
  for (int64_t j = 1; j <= resolution; ++j)
    digits[size_t(j - 1)] = int64_t(ws.at(-j));
  return dary_state(base, std::move(digits));
}

}  // namespace regen::models
