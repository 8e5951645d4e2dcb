#include "nefcone/emin_kernels.hpp"

#if defined(NEFCONE_HAVE_AVX2_TU)

#include <immintrin.h>

#include <limits>

namespace nefcone::emin::kernels {

void row_min_avx2(const Row& row, std::int32_t* out) {
  __m256i partial[27], lin[27];
  int t = 0;
  for (int q1 = -1; q1 <= 1; ++q1)
    for (int q2 = -1; q2 <= 1; ++q2)
      for (int q3 = -1; q3 <= 1; ++q3, ++t) {
        std::int32_t v1 = row.s * q1 + row.a1, v2 = row.s * q2 + row.a2, v3 = row.s * q3 + row.a3;
        partial[t] = _mm256_set1_epi32(2 * (v1 * v1 + v2 * v2 + v3 * v3) + 2 * v1 * v2 - 2 * v1 * v3 - 2 * v2 * v3);
        lin[t] = _mm256_set1_epi32(-2 * (v1 + v2));
      }
  const __m256i s = _mm256_set1_epi32(row.s);
  int j = 0;
  for (; j + 8 <= row.n; j += 8) {
    __m256i a4 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row.a4 + j));
    __m256i best = _mm256_set1_epi32(std::numeric_limits<std::int32_t>::max());
    __m256i v4s[3] = {_mm256_sub_epi32(a4, s), a4, _mm256_add_epi32(a4, s)};
    for (const __m256i& v4 : v4s) {
      __m256i sq = _mm256_mullo_epi32(v4, v4);
      sq = _mm256_add_epi32(sq, sq);
      for (int k = 0; k < 27; ++k) {
        __m256i e = _mm256_add_epi32(_mm256_add_epi32(partial[k], _mm256_mullo_epi32(lin[k], v4)), sq);
        best = _mm256_min_epi32(best, e);
      }
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + j), best);
  }
  if (j < row.n) {
    Row tail = row;
    tail.a4 = row.a4 + j;
    tail.n = row.n - j;
    row_min_scalar(tail, out + j);
  }
}

}  // namespace nefcone::emin::kernels

#endif
