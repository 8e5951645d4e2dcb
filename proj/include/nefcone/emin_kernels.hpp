#pragma once

#include <cstdint>
#include <string>

namespace nefcone::emin::kernels {

// One row of the scaled grid: points v = (a1, a2, a3, a4[j]) / s. For every j
// the kernel writes min over q in {-1,0,1}^4 of the integer form
// 2 e(s q + v) for the normalised form e (scaled by s^2).
struct Row {
  std::int32_t s;
  std::int32_t a1, a2, a3;
  const std::int32_t* a4;
  int n;
};

enum class Isa { Scalar, Avx2 };

bool avx2_available();
// Avx2 when compiled in and supported by the CPU, otherwise Scalar.
Isa best_isa();
std::string to_string(Isa isa);

void row_min_scalar(const Row& row, std::int32_t* out);
// Falls back to the scalar kernel when AVX2 was not compiled in.
void row_min_avx2(const Row& row, std::int32_t* out);
void row_min(Isa isa, const Row& row, std::int32_t* out);

}  // namespace nefcone::emin::kernels
