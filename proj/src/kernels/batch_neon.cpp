#include "regen/kernels/batch.hpp"
#include "regen/kernels/philox.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

// 4-way Philox on NEON. vcvtq_f64_u64 is exact for values < 2^53, so outputs
// match the scalar kernel bit for bit.

namespace regen::kernels {

namespace {

// One 4-lane mulhilo: 32x32 -> 64 via vmull on the two u32x2 halves.
inline void mulhilo4(uint32x4_t c, uint32_t mult, uint32x4_t* lo,
                     uint32x4_t* hi) {
  const uint32x2_t m2 = vdup_n_u32(mult);
  const uint64x2_t p01 = vmull_u32(vget_low_u32(c), m2);
  const uint64x2_t p23 = vmull_u32(vget_high_u32(c), m2);
  *lo = vcombine_u32(vmovn_u64(p01), vmovn_u64(p23));
  *hi = vcombine_u32(vshrn_n_u64(p01, 32), vshrn_n_u64(p23, 32));
}

}  // namespace

void fill_uniforms_neon(uint64_t seed, int64_t first, size_t n, double* out) {
  const uint64_t base = uint64_t(first);
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    uint32_t lo32[4], hi32[4];
    for (int l = 0; l < 4; ++l) {
      const uint64_t idx = base + j + l;
      lo32[l] = uint32_t(idx);
      hi32[l] = uint32_t(idx >> 32);
    }
    uint32x4_t c0 = vld1q_u32(lo32);
    uint32x4_t c1 = vld1q_u32(hi32);
    uint32x4_t c2 = vdupq_n_u32(kFieldPad2);
    uint32x4_t c3 = vdupq_n_u32(kFieldPad3);
    uint32x4_t k0 = vdupq_n_u32(uint32_t(seed));
    uint32x4_t k1 = vdupq_n_u32(uint32_t(seed >> 32));
    const uint32x4_t wa = vdupq_n_u32(kPhiloxW32A);
    const uint32x4_t wb = vdupq_n_u32(kPhiloxW32B);

    for (int r = 0; r < kPhiloxRounds; ++r) {
      if (r != 0) {
        k0 = vaddq_u32(k0, wa);
        k1 = vaddq_u32(k1, wb);
      }
      uint32x4_t lo0, hi0, lo1, hi1;
      mulhilo4(c0, kPhiloxM4x32A, &lo0, &hi0);
      mulhilo4(c2, kPhiloxM4x32B, &lo1, &hi1);
      const uint32x4_t n0 = veorq_u32(veorq_u32(hi1, c1), k0);
      const uint32x4_t n2 = veorq_u32(veorq_u32(hi0, c3), k1);
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
    }

    // bits_l = (word1_l << 32 | word0_l) >> 11, then exact convert and scale.
    const uint64x2_t b01 = vshrq_n_u64(
        vreinterpretq_u64_u32(vzip1q_u32(c0, c1)), 11);
    const uint64x2_t b23 = vshrq_n_u64(
        vreinterpretq_u64_u32(vzip2q_u32(c0, c1)), 11);
    const float64x2_t scale = vdupq_n_f64(0x1.0p-53);
    vst1q_f64(out + j, vmulq_f64(vcvtq_f64_u64(b01), scale));
    vst1q_f64(out + j + 2, vmulq_f64(vcvtq_f64_u64(b23), scale));
  }
  if (j < n) fill_uniforms_scalar(seed, int64_t(base + j), n - j, out + j);
}

void count_levels_neon(const double* u, size_t n, const double* thresholds,
                       size_t m, int32_t* out) {
  size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const float64x2_t uv = vld1q_f64(u + j);
    uint64x2_t counts = vdupq_n_u64(0);
    for (size_t i = 0; i < m; ++i) {
      const float64x2_t t = vdupq_n_f64(thresholds[i]);
      counts = vsubq_u64(counts, vcgeq_f64(uv, t));
    }
    out[j] = int32_t(vgetq_lane_u64(counts, 0));
    out[j + 1] = int32_t(vgetq_lane_u64(counts, 1));
  }
  if (j < n) count_levels_scalar(u + j, n - j, thresholds, m, out + j);
}

}  // namespace regen::kernels

#endif
