#pragma once

#include <cstddef>
#include <cstdint>

#include "regen/kernels/batch.hpp"
#include "regen/kernels/philox.hpp"

namespace regen {

// Deterministic map (seed, signed index) -> uniform in [0,1). Lookups are
// pure: any index, any order, no state. This is what lets regeneration
// windows share uniforms and lets overlapping windows agree exactly.
class UniformField {
 public:
  explicit UniformField(uint64_t seed) : seed_(seed) {}

  uint64_t seed() const { return seed_; }

  double at(int64_t i) const {
    return kernels::field_uniform(seed_, uint64_t(i));
  }

  // Contiguous batch; bit-identical to per-index at().
  void fill(int64_t first, size_t n, double* out) const {
    kernels::fill_uniforms(seed_, first, n, out);
  }

 private:
  uint64_t seed_;
};

// Documented replicate-seed derivation: splitmix64 of the master seed offset
// by the golden-ratio increment per replicate. Replicates are individually
// reproducible from (master, index).
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline uint64_t replicate_seed(uint64_t master, uint64_t index) {
  return splitmix64(master + index * 0x9E3779B97F4A7C15ull);
}

}  // namespace regen
