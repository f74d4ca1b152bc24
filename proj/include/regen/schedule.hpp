#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "regen/errors.hpp"

namespace regen {

// Continuation rules for threshold values beyond the explicit head. Each rule
// gives a*_k as a closed form of the absolute depth k.
struct NoTail {};                 // schedule ends with the head
struct DegenerateOneTail {};      // a*_k = 1 exactly: finite-memory flag
struct ConstantTail {
  double value;
};
struct GeometricTail {            // a*_k = 1 - coeff * ratio^k
  double coeff;
  double ratio;
};
struct PowerTail {                // a*_k = 1 - coeff * (k+1)^-exponent
  double coeff;
  double exponent;
};
struct CustomTail {               // user closure; must be non-decreasing, < 1
  std::function<double(int64_t)> fn;
  double sup;                     // declared supremum of the whole sequence
};

using TailRule = std::variant<NoTail, DegenerateOneTail, ConstantTail,
                              GeometricTail, PowerTail, CustomTail>;

// Marker returned when a uniform exceeds every queryable threshold.
inline constexpr int64_t kUnboundedLevel = std::numeric_limits<int64_t>::max();

// Non-decreasing sequence a*_0 <= a*_1 <= ... with a*_0 > 0. Values are < 1
// except under the degenerate-one tail, whose exact 1.0 entries encode finite
// memory (conditions at those depths hold vacuously). Convention: a*_{-1}=0.
class ThresholdSchedule {
 public:
  ThresholdSchedule(std::vector<double> head, TailRule tail);

  // a*_k; accepts k = -1. Throws ScheduleExhausted past a NoTail head.
  double value(int64_t k) const;

  bool degenerate_at(int64_t k) const;
  int64_t head_size() const { return int64_t(head_.size()); }
  const std::vector<double>& head() const { return head_; }
  const TailRule& tail() const { return tail_; }
  double declared_sup() const { return sup_; }

  // Head plus resolved tail values (bitwise equal to value(k)); ascending,
  // sized for the batch level-count kernel. Entries equal to 1.0 are the
  // degenerate flag and can never be counted below a uniform.
  const std::vector<double>& resolved_prefix() const { return prefix_; }

 private:
  std::vector<double> head_;
  TailRule tail_;
  double sup_ = 1.0;
  std::vector<double> prefix_;
};

// The unique k with a*_{k-1} <= u < a*_k, i.e. the number of thresholds <= u;
// kUnboundedLevel when u dominates every queryable threshold.
int64_t schedule_level(double u, const ThresholdSchedule& schedule);

}  // namespace regen
