#include "regen/partition.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace regen {

Located locate(double u, const HistoryReader& history,
               const SpecificationKernel& spec, int64_t cap) {
  if (!(u >= 0.0) || !(u < 1.0)) throw Error("locate requires u in [0,1)");
  if (cap < 0 || cap == std::numeric_limits<int64_t>::max())
    throw Error("locate requires a finite non-negative level cap");

  const Alphabet& alphabet = spec.alphabet();
  const size_t g_count = alphabet.size();

  std::vector<double> prev(g_count, 0.0);  // a_{l-1}(g|w) per symbol
  std::vector<Symbol> w;                   // history read so far, lags 1..l
  w.reserve(8);
  double boundary = 0.0;  // left end of the next interval; u >= boundary holds

  for (int64_t level = 0; level <= cap; ++level) {
    if (level > 0) w.push_back(history(level));
    for (size_t gi = 0; gi < g_count; ++gi) {
      const double a = spec.minorant(level, alphabet.at(gi),
                                     std::span<const Symbol>(w));
      const double len = std::max(0.0, a - prev[gi]);
      if (u < boundary + len) return {level, alphabet.at(gi)};
      boundary += len;
      prev[gi] = std::max(prev[gi], a);
    }
  }

  throw DominanceViolation(
      "uniform " + std::to_string(u) + " not covered by " +
      std::to_string(cap + 1) + " levels (mass " + std::to_string(boundary) +
      "): minorants break the schedule dominance contract");
}

}  // namespace regen
