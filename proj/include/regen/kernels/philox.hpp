#pragma once

#include <array>
#include <cstdint>

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Stateless: each 128-bit block is a pure function of (counter, key), so the
// indexed uniform field can be evaluated at arbitrary indices in any order.

namespace regen::kernels {

inline constexpr uint32_t kPhiloxW32A = 0x9E3779B9u;
inline constexpr uint32_t kPhiloxW32B = 0xBB67AE85u;
inline constexpr uint32_t kPhiloxM4x32A = 0xD2511F53u;
inline constexpr uint32_t kPhiloxM4x32B = 0xCD9E8D57u;
inline constexpr int kPhiloxRounds = 10;

inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
  for (int r = 0; r < kPhiloxRounds; ++r) {
    if (r != 0) {
      key[0] += kPhiloxW32A;
      key[1] += kPhiloxW32B;
    }
    const uint64_t p0 = uint64_t(kPhiloxM4x32A) * ctr[0];
    const uint64_t p1 = uint64_t(kPhiloxM4x32B) * ctr[2];
    ctr = {uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], uint32_t(p1),
           uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], uint32_t(p0)};
  }
  return ctr;
}

// Counter layout for the indexed field: words 0..1 carry the (wrapped) signed
// index, words 2..3 are fixed pad so blocks never collide across indices.
inline constexpr uint32_t kFieldPad2 = 0x243F6A88u;
inline constexpr uint32_t kFieldPad3 = 0x85A308D3u;

inline uint64_t field_bits(uint64_t seed, uint64_t index) {
  const auto out =
      philox4x32({uint32_t(index), uint32_t(index >> 32), kFieldPad2, kFieldPad3},
                 {uint32_t(seed), uint32_t(seed >> 32)});
  return (uint64_t(out[1]) << 32) | out[0];
}

// Top 53 bits -> [0,1). Exact: the integer is < 2^53 and the scale is a power
// of two, so no rounding occurs and 1.0 is never produced.
inline double u53(uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

inline double field_uniform(uint64_t seed, uint64_t index) {
  return u53(field_bits(seed, index));
}

}  // namespace regen::kernels
