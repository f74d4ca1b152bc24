#pragma once

#include <cstdint>
#include <functional>

#include "regen/specification.hpp"

namespace regen {

struct Located {
  int64_t level;
  Symbol symbol;
};

// Serves the symbol at lag d (d = 1 is the most recent) for d in 1..cap.
using HistoryReader = std::function<Symbol(int64_t)>;

// Resolves u to the unique layered-partition interval B_level(symbol|history).
// Intervals are laid out consecutively from 0, level-major, symbols in
// alphabet order within a level, each left-closed right-open with length
// minorant(level, g, w) - minorant(level-1, g, w). Levels are built lazily and
// history is read only down to the returned level.
//
// Precondition: u < a*_cap of the paired schedule. If the minorants fail to
// cover [0, u] within `cap` levels, throws DominanceViolation.
Located locate(double u, const HistoryReader& history,
               const SpecificationKernel& spec, int64_t cap);

}  // namespace regen
