#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "regen/alphabet.hpp"
#include "regen/schedule.hpp"
#include "regen/specification.hpp"

namespace regen::models {

// Markov kernel of fixed order: P(g | w) depends on the last `order` symbols
// only. Depth-k bounds for k < order take the worst case over the unseen
// context slots; at depth >= order the table value is exact, so the derived
// schedule ends in a degenerate tail at 1.
class FiniteOrderSpec : public SpecificationKernel {
 public:
  // table[context * |G| + gi] = P(symbol gi | context), where the context
  // code reads most-recent lag as the least significant base-|G| digit:
  // context = sum_j index_of(w_{-(j+1)}) |G|^j. Rows are validated to sum to
  // 1 (1e-9) and then normalized exactly.
  FiniteOrderSpec(Alphabet alphabet, int64_t order, std::vector<double> table);

  const Alphabet& alphabet() const override { return alphabet_; }
  double minorant(int64_t k, Symbol g,
                  std::span<const Symbol> w) const override;

  int64_t order() const { return order_; }
  int64_t context_count() const { return contexts_; }
  // Normalized transition probability by context code and symbol index.
  double transition(int64_t context, int64_t g_index) const {
    return table_[size_t(context * int64_t(alphabet_.size()) + g_index)];
  }
  // Context code of a history given most-recent-first, length >= order.
  int64_t context_of(std::span<const Symbol> w) const;

  const ThresholdSchedule& schedule() const { return schedule_; }

 private:
  double completion_min(int64_t k, int64_t g_index, int64_t known_code) const;

  Alphabet alphabet_;
  int64_t order_;
  int64_t contexts_;  // |G|^order
  std::vector<double> table_;
  ThresholdSchedule schedule_{{}, DegenerateOneTail{}};
};

}  // namespace regen::models
