#pragma once

#include <cstddef>
#include <cstdint>

// Batch kernels behind the hot loops: filling runs of field uniforms and
// counting schedule thresholds below each uniform. Scalar reference versions
// plus SIMD variants selected at runtime; every variant is bit-identical to
// the scalar one (integer work and exact double conversions only).

namespace regen::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

// Resolved once per process: best supported ISA, overridable via environment
// variable REGENSIM_ISA in {scalar, avx2, neon, auto}. Unsupported requests
// fall back to the best available variant.
Isa active_isa();

// out[j] = uniform of stream `seed` at index first + j (index wraps mod 2^64).
void fill_uniforms(uint64_t seed, int64_t first, size_t n, double* out);

// out[j] = |{ i < m : thresholds[i] <= u[j] }|. Thresholds must be ascending;
// for an ascending sequence this count is the first index whose threshold
// exceeds u[j], or m when none does.
void count_levels(const double* u, size_t n, const double* thresholds, size_t m,
                  int32_t* out);

// Per-ISA entry points, exposed so equivalence tests can drive each variant
// explicitly. Callers otherwise use the dispatched forms above.
void fill_uniforms_scalar(uint64_t seed, int64_t first, size_t n, double* out);
void count_levels_scalar(const double* u, size_t n, const double* thresholds,
                         size_t m, int32_t* out);

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2();
void fill_uniforms_avx2(uint64_t seed, int64_t first, size_t n, double* out);
void count_levels_avx2(const double* u, size_t n, const double* thresholds,
                       size_t m, int32_t* out);
#endif

#if defined(__aarch64__)
void fill_uniforms_neon(uint64_t seed, int64_t first, size_t n, double* out);
void count_levels_neon(const double* u, size_t n, const double* thresholds,
                       size_t m, int32_t* out);
#endif

}  // namespace regen::kernels
