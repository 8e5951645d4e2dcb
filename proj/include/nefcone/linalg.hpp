#pragma once

#include <optional>
#include <vector>

#include "nefcone/rational.hpp"

namespace nefcone {

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;  // row-major
using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

RatMatrix zeros(std::size_t rows, std::size_t cols);
RatMatrix identity_matrix(std::size_t n);
RatMatrix transpose(const RatMatrix& a);
RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);
RatVector multiply(const RatMatrix& a, const RatVector& v);
Rational dot(const RatVector& a, const RatVector& b);

struct RowEchelon {
  RatMatrix reduced;           // reduced row echelon form
  std::vector<int> pivots;     // pivot column per nonzero row
};

RowEchelon rref(RatMatrix a);
int rank(const RatMatrix& a);
Rational determinant(RatMatrix a);
std::optional<RatMatrix> inverse(const RatMatrix& a);

// Basis of {x : a x = 0}, one vector per free column, in rref order.
std::vector<RatVector> nullspace(const RatMatrix& a, std::size_t cols);

// Some x with a x = b, or nullopt.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);

// Z-basis of {x in Z^n : a x = 0} for a rational matrix a.
IntMatrix integer_kernel(const RatMatrix& a, std::size_t cols);

// Scales a nonzero rational vector to a primitive integer vector with the same direction.
IntVector primitive_direction(const RatVector& v);

RatVector to_rational(const IntVector& v);

}  // namespace nefcone
