#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nefcone/emin_kernels.hpp"
#include "nefcone/linalg.hpp"

namespace nefcone::emin {

// min over integer q of (q + m)^T G (q + m).
struct ShiftedQuadMin {
  int dim = 0;
  RatMatrix gram;
  RatVector shift;
  Rational value;
  std::vector<RatVector> minimizers;  // the points q + m attaining the minimum
  // Completeness certificate: every minimiser satisfies lo_k <= q_k <= hi_k,
  // derived from |q_k + m_k|^2 <= bound * (G^-1)_kk.
  Rational bound;
  std::vector<long> lo, hi;
};

ShiftedQuadMin min_shifted(const RatMatrix& gram, const RatVector& m);

// min over w in m + Z^k of w^T G w + linear . w + constant.
ShiftedQuadMin min_shifted_affine(const RatMatrix& gram, const RatVector& linear, const Rational& constant,
                                  const RatVector& m);

// Minimum of the same affine objective over all w in (1/denominator) Z^k.
ShiftedQuadMin min_over_shift_grid(const RatMatrix& gram, const RatVector& linear, const Rational& constant,
                                   int denominator);

// Gram matrix of the normalised form e/2, whose value at q + m is the T2
// exponent of a theta summand.
const RatMatrix& e_gram();
Rational emin(const RatVector& x);

struct QuadratureOptions {
  int threads = 1;
  std::optional<kernels::Isa> isa;  // default: best available
  bool use_symmetry = true;
};

struct QuadratureResult {
  int n = 0;
  Rational mean;           // exact mean of emin over the midpoint grid
  std::string mean_float;  // 7 significant digits
  Integer scaled_sum;      // sum of 2 s^2 * emin over the grid, s = 2N
  long fallback_points = 0;
  std::string isa;
};

QuadratureResult grid_mean(int n, const QuadratureOptions& opts = {});

struct ErrorCertificate {
  int n = 0;
  Rational bound;
  std::string derivation;
};
// Bound on |grid_mean(N) - integral of emin|, from the 1-Lipschitz property of
// sqrt(emin) in the e-norm.
ErrorCertificate error_certificate(const QuadratureResult& q);
ErrorCertificate error_certificate(int n, const QuadratureOptions& opts = {});

struct Margin {
  QuadratureResult quadrature;
  ErrorCertificate certificate;
  Rational margin;             // mean - 3/16
  Rational certified_margin;   // mean - bound - 3/16, positive when the claim is proved
  Rational distance_conjectural;  // |mean - 13/60|
  Rational conjectural_value;     // 13/60, unproved
  Rational conjectural_limit;     // 13/60 - 3/16 = 7/240, unproved
};
// Throws when the certificate at this N is too weak to prove a positive margin.
Margin weissauer_margin(int n, const QuadratureOptions& opts = {});

std::string render_float(const Rational& r, int significant);

}  // namespace nefcone::emin
