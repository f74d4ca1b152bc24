#include <cstdlib>
#include <string>

#include "regen/kernels/batch.hpp"

namespace regen::kernels {

namespace {

using FillFn = void (*)(uint64_t, int64_t, size_t, double*);
using CountFn = void (*)(const double*, size_t, const double*, size_t, int32_t*);

struct Table {
  Isa isa;
  FillFn fill;
  CountFn count;
};

Table select() {
  std::string want = "auto";
  if (const char* env = std::getenv("REGENSIM_ISA")) want = env;

#if defined(__x86_64__) || defined(_M_X64)
  const bool has_avx2 = cpu_has_avx2();
  if (want == "avx2" && has_avx2)
    return {Isa::avx2, fill_uniforms_avx2, count_levels_avx2};
  if (want == "scalar")
    return {Isa::scalar, fill_uniforms_scalar, count_levels_scalar};
  if (has_avx2) return {Isa::avx2, fill_uniforms_avx2, count_levels_avx2};
#elif defined(__aarch64__)
  if (want == "scalar")
    return {Isa::scalar, fill_uniforms_scalar, count_levels_scalar};
  return {Isa::neon, fill_uniforms_neon, count_levels_neon};
#else
  (void)want;
#endif
  return {Isa::scalar, fill_uniforms_scalar, count_levels_scalar};
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

Isa active_isa() { return table().isa; }

void fill_uniforms(uint64_t seed, int64_t first, size_t n, double* out) {
  table().fill(seed, first, n, out);
}

void count_levels(const double* u, size_t n, const double* thresholds, size_t m,
                  int32_t* out) {
  table().count(u, n, thresholds, m, out);
}

}  // namespace regen::kernels
