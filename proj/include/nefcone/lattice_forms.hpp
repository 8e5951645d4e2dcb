#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nefcone/linalg.hpp"
#include "nefcone/rational.hpp"

namespace nefcone::forms {

constexpr int kMaxDim = 4;

inline int coord_count(int g) { return g * (g + 1) / 2; }

// Position of U*_ij in the fixed ordering (11,22,..,gg,12,13,..,(g-1)g); 0-based indices.
int coord_index(int g, int i, int j);

// (i, j) pair for each coordinate position, 0-based.
std::pair<int, int> coord_pair(int g, int k);

// Quadratic form in the U*_ij basis: U*_ii <-> x_i^2, U*_ij <-> 2 x_i x_j.
class QuadForm {
 public:
  QuadForm() = default;
  explicit QuadForm(int dim);
  QuadForm(int dim, std::vector<Rational> coords);
  QuadForm(int dim, std::initializer_list<long> coords);

  static QuadForm from_gram(const RatMatrix& gram);
  static QuadForm unit(int dim, int i, int j);  // U*_ij, 0-based

  int dim() const { return dim_; }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& at(int i, int j) const { return coords_[coord_index(dim_, i, j)]; }
  bool is_integral() const;
  bool is_zero() const;
  RatMatrix gram() const;

  // Content (gcd of the integer coordinates); the form must be integral.
  Integer content() const;
  // Integral primitive form on the same ray; the form must be nonzero.
  QuadForm primitive() const;

  QuadForm operator+(const QuadForm& o) const;
  QuadForm operator-(const QuadForm& o) const;
  QuadForm operator-() const;
  QuadForm operator*(const Rational& s) const;
  friend QuadForm operator*(const Rational& s, const QuadForm& q) { return q * s; }
  QuadForm& operator+=(const QuadForm& o);

  bool operator==(const QuadForm& o) const { return dim_ == o.dim_ && coords_ == o.coords_; }
  bool operator!=(const QuadForm& o) const { return !(*this == o); }
  bool operator<(const QuadForm& o) const;

 private:
  void check_length() const;
  int dim_ = 0;
  std::vector<Rational> coords_;
};

class LinearForm {
 public:
  LinearForm() = default;
  LinearForm(std::vector<long> coeffs);
  LinearForm(std::initializer_list<long> coeffs) : LinearForm(std::vector<long>(coeffs)) {}

  int dim() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<long>& coeffs() const { return coeffs_; }
  long operator[](int i) const { return coeffs_[i]; }
  bool is_zero() const;
  bool is_primitive() const;
  LinearForm primitive() const;
  // Sign normalised so that the first nonzero coefficient is positive.
  LinearForm sign_normalized() const;
  LinearForm operator-() const;
  LinearForm operator+(const LinearForm& o) const;
  LinearForm operator-(const LinearForm& o) const;
  bool operator==(const LinearForm& o) const { return coeffs_ == o.coeffs_; }
  bool operator<(const LinearForm& o) const { return coeffs_ < o.coeffs_; }

 private:
  std::vector<long> coeffs_;
};

// Integer map given by the images of the variables: row i of matrix is the
// image of x_i, so q acted on by m is q(M x).
class LatticeMap {
 public:
  LatticeMap() = default;
  explicit LatticeMap(std::vector<std::vector<long>> matrix);
  static LatticeMap identity(int dim);

  int dim() const { return static_cast<int>(matrix_.size()); }
  const std::vector<std::vector<long>>& matrix() const { return matrix_; }
  long determinant() const { return det_; }
  RatMatrix as_rational() const;

  // Ordinary matrix product.
  LatticeMap operator*(const LatticeMap& o) const;
  LatticeMap inverse() const;  // requires det = +-1
  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  LinearForm apply(const LinearForm& l) const;  // substitution in l

  bool operator==(const LatticeMap& o) const { return matrix_ == o.matrix_; }
  bool operator<(const LatticeMap& o) const { return matrix_ < o.matrix_; }

 private:
  std::vector<std::vector<long>> matrix_;
  long det_ = 0;
};

class DualVector {
 public:
  DualVector() = default;
  DualVector(int dim, std::vector<Rational> coords);
  DualVector(int dim, std::initializer_list<long> coords);
  static DualVector unit(int dim, int i, int j);  // U_ij, 0-based

  int dim() const { return dim_; }
  const std::vector<Rational>& coords() const { return coords_; }
  Rational pair(const QuadForm& q) const;
  bool is_zero() const;

  DualVector operator+(const DualVector& o) const;
  DualVector operator-(const DualVector& o) const;
  DualVector operator-() const;
  DualVector operator*(const Rational& s) const;
  bool operator==(const DualVector& o) const { return dim_ == o.dim_ && coords_ == o.coords_; }
  bool operator<(const DualVector& o) const;

 private:
  int dim_ = 0;
  std::vector<Rational> coords_;
};

QuadForm square(const LinearForm& l);
Rational evaluate(const QuadForm& q, const std::vector<Rational>& v);

struct PsdRank {
  bool is_psd;
  int rank;
};
PsdRank psd_rank(const QuadForm& q);

QuadForm act(const LatticeMap& m, const QuadForm& q);

// Restriction to the sublattice spanned by the given integer vectors: Gram -> B^T A B.
QuadForm restrict_to(const QuadForm& q, const IntMatrix& basis_vectors);

// Deletes every coordinate involving the axis (1-based) and relabels.
QuadForm project(const QuadForm& q, int axis);
LinearForm project(const LinearForm& l, int axis);

// Voronoi transformation in the substitution convention.
const LatticeMap& psi();
Rational half_trace_prime(const QuadForm& q);

struct KernelLattice {
  IntMatrix basis;
  int rank;
};
KernelLattice kernel_lattice(const std::vector<QuadForm>& forms);

// Conjugates a rational map given in y-coordinates (rows = images of y_i)
// into x-coordinates; throws with the offending entry if it is not integral.
LatticeMap y_to_x(const RatMatrix& m_y);

// If q = c * l^2 for a linear form l, returns the primitive sign-normalised l.
std::optional<LinearForm> rank_one_root(const QuadForm& q);

}  // namespace nefcone::forms
