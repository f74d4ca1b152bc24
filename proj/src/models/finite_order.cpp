#include "regen/models/finite_order.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regen/errors.hpp"

namespace regen::models {

namespace {

constexpr int64_t kStateGuard = int64_t(1) << 22;  // |G|^order ceiling

}  // namespace

FiniteOrderSpec::FiniteOrderSpec(Alphabet alphabet, int64_t order,
                                 std::vector<double> table)
    : alphabet_(std::move(alphabet)), order_(order), table_(std::move(table)) {
  if (order_ < 0) throw InvalidSpecification("order must be non-negative");
  const int64_t g = int64_t(alphabet_.size());
  contexts_ = 1;
  for (int64_t j = 0; j < order_; ++j) {
    contexts_ *= g;
    if (contexts_ > kStateGuard)
      throw InvalidSpecification("context space |G|^order is too large");
  }
  if (int64_t(table_.size()) != contexts_ * g)
    throw InvalidSpecification("table needs |G|^order rows of |G| entries");

  for (int64_t c = 0; c < contexts_; ++c) {
    double sum = 0.0;
    for (int64_t gi = 0; gi < g; ++gi) {
      const double p = table_[size_t(c * g + gi)];
      if (!(p >= 0.0) || !(p <= 1.0))
        throw InvalidSpecification("table entries must lie in [0,1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InvalidSpecification("context row " + std::to_string(c) +
                                 " sums to " + std::to_string(sum));
    for (int64_t gi = 0; gi < g; ++gi) table_[size_t(c * g + gi)] /= sum;
  }

  // Depth-k head values: worst total mass over all length-k prefixes.
  std::vector<double> head;
  head.reserve(size_t(order_));
  for (int64_t k = 0; k < order_; ++k) {
    int64_t prefixes = 1;
    for (int64_t j = 0; j < k; ++j) prefixes *= g;
    double worst = 2.0;
    for (int64_t code = 0; code < prefixes; ++code) {
      double mass = 0.0;
      for (int64_t gi = 0; gi < g; ++gi)
        mass += completion_min(k, gi, code);
      worst = std::min(worst, mass);
    }
    if (!(worst > 0.0))
      throw InvalidSpecification(
          "table admits no positive uniform bound at depth " +
          std::to_string(k) + "; regeneration cannot start");
    head.push_back(std::min(worst, 1.0));
  }
  for (int64_t k = int64_t(head.size()) - 2; k >= 0; --k)
    head[size_t(k)] = std::min(head[size_t(k)], head[size_t(k + 1)]);
  while (!head.empty() && head.back() >= 1.0) head.pop_back();

  schedule_ = ThresholdSchedule(std::move(head), DegenerateOneTail{});
}

int64_t FiniteOrderSpec::context_of(std::span<const Symbol> w) const {
  if (int64_t(w.size()) < order_)
    throw Error("context needs " + std::to_string(order_) + " symbols");
  const int64_t g = int64_t(alphabet_.size());
  int64_t code = 0;
  for (int64_t j = order_ - 1; j >= 0; --j)
    code = code * g + alphabet_.index_of(w[size_t(j)]);
  return code;
}

// Minimum of P(g | context) over contexts that extend the known low digits.
double FiniteOrderSpec::completion_min(int64_t k, int64_t g_index,
                                       int64_t known_code) const {
  const int64_t g = int64_t(alphabet_.size());
  int64_t known = 1;
  for (int64_t j = 0; j < k; ++j) known *= g;
  const int64_t free_count = contexts_ / known;
  double best = 2.0;
  for (int64_t hi = 0; hi < free_count; ++hi)
    best = std::min(best, transition(hi * known + known_code, g_index));
  return best;
}

double FiniteOrderSpec::minorant(int64_t k, Symbol g,
                                 std::span<const Symbol> w) const {
  const int64_t gi = alphabet_.index_of(g);
  if (k >= order_) return transition(context_of(w), gi);
  const int64_t base = int64_t(alphabet_.size());
  int64_t code = 0;
  for (int64_t j = k - 1; j >= 0; --j)
    code = code * base + alphabet_.index_of(w[size_t(j)]);
  return completion_min(k, gi, code);
}

}  // namespace regen::models
