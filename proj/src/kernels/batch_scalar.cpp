#include "regen/kernels/batch.hpp"
#include "regen/kernels/philox.hpp"

namespace regen::kernels {

void fill_uniforms_scalar(uint64_t seed, int64_t first, size_t n, double* out) {
  const uint64_t base = uint64_t(first);
  for (size_t j = 0; j < n; ++j) out[j] = field_uniform(seed, base + j);
}

void count_levels_scalar(const double* u, size_t n, const double* thresholds,
                         size_t m, int32_t* out) {
  for (size_t j = 0; j < n; ++j) {
    int32_t c = 0;
    for (size_t i = 0; i < m; ++i) c += thresholds[i] <= u[j];
    out[j] = c;
  }
}

}  // namespace regen::kernels
