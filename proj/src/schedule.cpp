#include "regen/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace regen {

namespace {

constexpr int64_t kPrefixExtension = 64;

// Deterministic ratio^k by binary exponentiation: IEEE multiplications only,
// no libm, so schedule values are reproducible across platforms.
double pow_int(double base, uint64_t e) {
  double acc = 1.0;
  double b = base;
  while (e != 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

struct TailValue {
  const int64_t k;
  double operator()(NoTail) const {
    throw ScheduleExhausted("threshold schedule has no value at depth " +
                            std::to_string(k));
  }
  double operator()(DegenerateOneTail) const { return 1.0; }
  double operator()(const ConstantTail& t) const { return t.value; }
  double operator()(const GeometricTail& t) const {
    return 1.0 - t.coeff * pow_int(t.ratio, uint64_t(k));
  }
  double operator()(const PowerTail& t) const {
    // Fractional power; deterministic per platform via the host libm.
    return 1.0 - t.coeff * std::pow(double(k) + 1.0, -t.exponent);
  }
  double operator()(const CustomTail& t) const { return t.fn(k); }
};

}  // namespace

ThresholdSchedule::ThresholdSchedule(std::vector<double> head, TailRule tail)
    : head_(std::move(head)), tail_(std::move(tail)) {
  for (size_t i = 0; i < head_.size(); ++i) {
    if (!(head_[i] > 0.0) || !(head_[i] < 1.0))
      throw InvalidSpecification("schedule head values must lie in (0,1)");
    if (i > 0 && head_[i] < head_[i - 1])
      throw InvalidSpecification("schedule must be non-decreasing");
  }

  if (std::holds_alternative<NoTail>(tail_)) {
    if (head_.empty())
      throw InvalidSpecification("schedule with no tail rule needs a head");
    sup_ = head_.back();
  } else if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    if (!(c->value > 0.0) || !(c->value < 1.0))
      throw InvalidSpecification("constant tail value must lie in (0,1)");
    sup_ = c->value;
  } else if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
    if (!(g->coeff > 0.0) || !(g->ratio > 0.0) || !(g->ratio < 1.0))
      throw InvalidSpecification("geometric tail needs coeff > 0, ratio in (0,1)");
    sup_ = 1.0;
  } else if (const auto* p = std::get_if<PowerTail>(&tail_)) {
    if (!(p->coeff > 0.0) || !(p->exponent > 0.0))
      throw InvalidSpecification("power tail needs coeff > 0, exponent > 0");
    sup_ = 1.0;
  } else if (const auto* u = std::get_if<CustomTail>(&tail_)) {
    if (!u->fn) throw InvalidSpecification("custom tail needs a function");
    if (!(u->sup > 0.0) || u->sup > 1.0)
      throw InvalidSpecification("custom tail sup must lie in (0,1]");
    sup_ = u->sup;
  } else {
    sup_ = 1.0;  // degenerate-one tail
  }

  const int64_t h = int64_t(head_.size());
  const int64_t extend = std::holds_alternative<NoTail>(tail_)
                             ? 0
                             : (std::holds_alternative<DegenerateOneTail>(tail_)
                                    ? 1
                                    : kPrefixExtension);
  prefix_.reserve(size_t(h + extend));
  prefix_ = head_;
  for (int64_t k = h; k < h + extend; ++k) {
    const double v = std::visit(TailValue{k}, tail_);
    const double prev = prefix_.empty() ? 0.0 : prefix_.back();
    if (v < prev)
      throw InvalidSpecification("schedule must be non-decreasing at tail");
    // Exactly 1.0 is allowed: tails approaching 1 saturate in double
    // arithmetic, and a threshold of 1.0 passes every uniform in [0,1).
    if (!(v > 0.0) || v > 1.0)
      throw InvalidSpecification("tail values must lie in (0,1]");
    prefix_.push_back(v);
  }

  const double first = prefix_.empty() ? std::visit(TailValue{0}, tail_)
                                       : prefix_.front();
  if (!(first > 0.0))
    throw InvalidSpecification("first threshold must be positive");
}

double ThresholdSchedule::value(int64_t k) const {
  if (k < 0) return 0.0;
  if (k < int64_t(head_.size())) return head_[size_t(k)];
  return std::visit(TailValue{k}, tail_);
}

bool ThresholdSchedule::degenerate_at(int64_t k) const {
  return k >= int64_t(head_.size()) &&
         std::holds_alternative<DegenerateOneTail>(tail_);
}

namespace {

// Verified analytic inversion: step back from the candidate until the level
// condition fails, then forward to the first depth that satisfies it. All
// final decisions are the exact comparisons u < a*_k.
int64_t invert_from_candidate(double u, const ThresholdSchedule& s,
                              int64_t candidate, int64_t floor_k) {
  int64_t k = std::max(candidate, floor_k);
  while (k > floor_k && u < s.value(k - 1)) --k;
  while (!(u < s.value(k))) ++k;
  return k;
}

}  // namespace

int64_t schedule_level(double u, const ThresholdSchedule& schedule) {
  if (!(u >= 0.0) || !(u < 1.0))
    throw Error("schedule_level requires u in [0,1)");

  const auto& prefix = schedule.resolved_prefix();
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
  if (it != prefix.end()) return it - prefix.begin();

  // u >= every resolved value: resolve through the tail rule.
  const int64_t base = int64_t(prefix.size());
  const TailRule& tail = schedule.tail();
  if (std::holds_alternative<NoTail>(tail))
    throw ScheduleExhausted("uniform exceeds the final threshold");
  if (std::holds_alternative<DegenerateOneTail>(tail))
    return schedule.head_size();  // unreachable via prefix, kept for safety
  if (std::holds_alternative<ConstantTail>(tail)) return kUnboundedLevel;
  if (u >= schedule.declared_sup()) return kUnboundedLevel;

  if (const auto* g = std::get_if<GeometricTail>(&tail)) {
    // u < 1 - c r^k  <=>  k > log((1-u)/c) / log(r).
    const double est = std::log((1.0 - u) / g->coeff) / std::log(g->ratio);
    const int64_t candidate =
        std::isfinite(est) ? int64_t(std::floor(est)) - 1 : base;
    return invert_from_candidate(u, schedule, candidate, base);
  }
  if (const auto* p = std::get_if<PowerTail>(&tail)) {
    // u < 1 - c (k+1)^-e  <=>  (k+1)^e > c/(1-u).
    const double est = std::pow(p->coeff / (1.0 - u), 1.0 / p->exponent) - 1.0;
    const int64_t candidate =
        std::isfinite(est) ? int64_t(std::floor(est)) - 1 : base;
    return invert_from_candidate(u, schedule, candidate, base);
  }

  // Custom tail with sup above u: gallop then bisect on the first k with
  // u < fn(k); fn is required non-decreasing.
  int64_t lo = base;  // invariant: u >= value(lo - 1)
  int64_t step = 1;
  while (!(u < schedule.value(lo + step - 1))) {
    lo += step;
    step *= 2;
    if (step > (int64_t(1) << 40))
      throw Error("custom tail never exceeded the uniform below its sup");
  }
  int64_t hi = lo + step - 1;  // u < value(hi)
  while (lo < hi) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (u < schedule.value(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace regen
