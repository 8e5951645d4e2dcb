#include "nefcone/emin_kernels.hpp"

#include <algorithm>
#include <limits>

namespace nefcone::emin::kernels {

bool avx2_available() {
#if defined(NEFCONE_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa best_isa() { return avx2_available() ? Isa::Avx2 : Isa::Scalar; }

std::string to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void row_min_scalar(const Row& row, std::int32_t* out) {
  std::int32_t partial[27], lin[27];
  int t = 0;
  for (int q1 = -1; q1 <= 1; ++q1)
    for (int q2 = -1; q2 <= 1; ++q2)
      for (int q3 = -1; q3 <= 1; ++q3, ++t) {
        std::int32_t v1 = row.s * q1 + row.a1, v2 = row.s * q2 + row.a2, v3 = row.s * q3 + row.a3;
        partial[t] = 2 * (v1 * v1 + v2 * v2 + v3 * v3) + 2 * v1 * v2 - 2 * v1 * v3 - 2 * v2 * v3;
        lin[t] = -2 * (v1 + v2);
      }
  for (int j = 0; j < row.n; ++j) {
    std::int32_t best = std::numeric_limits<std::int32_t>::max();
    for (int q4 = -1; q4 <= 1; ++q4) {
      std::int32_t v4 = row.s * q4 + row.a4[j];
      std::int32_t sq = 2 * v4 * v4;
      for (int k = 0; k < 27; ++k) best = std::min(best, partial[k] + lin[k] * v4 + sq);
    }
    out[j] = best;
  }
}

#if !defined(NEFCONE_HAVE_AVX2_TU)
void row_min_avx2(const Row& row, std::int32_t* out) { row_min_scalar(row, out); }
#endif

void row_min(Isa isa, const Row& row, std::int32_t* out) {
  if (isa == Isa::Avx2 && avx2_available())
    row_min_avx2(row, out);
  else
    row_min_scalar(row, out);
}

}  // namespace nefcone::emin::kernels
