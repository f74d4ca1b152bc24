#include "regen/kernels/batch.hpp"
#include "regen/kernels/philox.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

// 8-way Philox in structure-of-arrays form: four __m256i vectors hold word i
// of 8 independent counters. All arithmetic is integer except the final
// uint64 -> double conversion, which is exact (see below), so outputs are
// bit-identical to the scalar kernel.

namespace regen::kernels {

namespace {

// 32x32 -> 64 multiply of every 32-bit lane against a broadcast constant.
// _mm256_mul_epu32 covers even lanes; odd lanes are shifted down first.
inline void mulhilo8(__m256i c, __m256i mult, __m256i* lo, __m256i* hi) {
  const __m256i pe = _mm256_mul_epu32(c, mult);
  const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(c, 32), mult);
  *lo = _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0xAA);
  *hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), po, 0xAA);
}

// Exact double(x) for x < 2^53: convert 32-bit halves with the 2^52 magic
// trick, then recombine. Both the scale by 2^32 and the sum are exact.
inline __m256d u64_to_f64(__m256i x) {
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);  // 2^52
  const __m256d magic_d = _mm256_set1_pd(0x1.0p52);
  const __m256i lo = _mm256_and_si256(x, _mm256_set1_epi64x(0xFFFFFFFFLL));
  const __m256i hi = _mm256_srli_epi64(x, 32);
  const __m256d dlo =
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(lo, magic)), magic_d);
  const __m256d dhi =
      _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(hi, magic)), magic_d);
  return _mm256_add_pd(_mm256_mul_pd(dhi, _mm256_set1_pd(0x1.0p32)), dlo);
}

}  // namespace

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

void fill_uniforms_avx2(uint64_t seed, int64_t first, size_t n, double* out) {
  const uint64_t base = uint64_t(first);
  const __m256i ma = _mm256_set1_epi32(int32_t(kPhiloxM4x32A));
  const __m256i mb = _mm256_set1_epi32(int32_t(kPhiloxM4x32B));
  const __m256i wa = _mm256_set1_epi32(int32_t(kPhiloxW32A));
  const __m256i wb = _mm256_set1_epi32(int32_t(kPhiloxW32B));
  const __m256i key0_init = _mm256_set1_epi32(int32_t(uint32_t(seed)));
  const __m256i key1_init = _mm256_set1_epi32(int32_t(uint32_t(seed >> 32)));

  size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    alignas(32) uint32_t lo32[8], hi32[8];
    for (int l = 0; l < 8; ++l) {
      const uint64_t idx = base + j + l;
      lo32[l] = uint32_t(idx);
      hi32[l] = uint32_t(idx >> 32);
    }
    __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo32));
    __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi32));
    __m256i c2 = _mm256_set1_epi32(int32_t(kFieldPad2));
    __m256i c3 = _mm256_set1_epi32(int32_t(kFieldPad3));
    __m256i k0 = key0_init;
    __m256i k1 = key1_init;

    for (int r = 0; r < kPhiloxRounds; ++r) {
      if (r != 0) {
        k0 = _mm256_add_epi32(k0, wa);
        k1 = _mm256_add_epi32(k1, wb);
      }
      __m256i lo0, hi0, lo1, hi1;
      mulhilo8(c0, ma, &lo0, &hi0);
      mulhilo8(c2, mb, &lo1, &hi1);
      const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0);
      const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1);
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
    }

    // bits_l = (word1_l << 32 | word0_l) >> 11, in lane order.
    const __m256i lo_pairs = _mm256_unpacklo_epi32(c0, c1);  // b0 b1 b4 b5
    const __m256i hi_pairs = _mm256_unpackhi_epi32(c0, c1);  // b2 b3 b6 b7
    const __m256i q0 = _mm256_srli_epi64(
        _mm256_permute2x128_si256(lo_pairs, hi_pairs, 0x20), 11);
    const __m256i q1 = _mm256_srli_epi64(
        _mm256_permute2x128_si256(lo_pairs, hi_pairs, 0x31), 11);
    const __m256d scale = _mm256_set1_pd(0x1.0p-53);
    _mm256_storeu_pd(out + j, _mm256_mul_pd(u64_to_f64(q0), scale));
    _mm256_storeu_pd(out + j + 4, _mm256_mul_pd(u64_to_f64(q1), scale));
  }
  if (j < n) fill_uniforms_scalar(seed, int64_t(base + j), n - j, out + j);
}

void count_levels_avx2(const double* u, size_t n, const double* thresholds,
                       size_t m, int32_t* out) {
  size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d uv = _mm256_loadu_pd(u + j);
    __m256i counts = _mm256_setzero_si256();
    for (size_t i = 0; i < m; ++i) {
      const __m256d t = _mm256_set1_pd(thresholds[i]);
      const __m256d ge = _mm256_cmp_pd(uv, t, _CMP_GE_OQ);
      counts = _mm256_sub_epi64(counts, _mm256_castpd_si256(ge));
    }
    alignas(32) int64_t c[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(c), counts);
    for (int l = 0; l < 4; ++l) out[j + l] = int32_t(c[l]);
  }
  if (j < n) count_levels_scalar(u + j, n - j, thresholds, m, out + j);
}

}  // namespace regen::kernels

#endif
