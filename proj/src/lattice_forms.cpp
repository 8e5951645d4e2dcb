#include "nefcone/lattice_forms.hpp"

#include <numeric>
#include <sstream>

namespace nefcone::forms {

int coord_index(int g, int i, int j) {
  if (i < 0 || j < 0 || i >= g || j >= g) throw InputError("coordinate index out of range");
  if (i == j) return i;
  if (i > j) std::swap(i, j);
  int k = g;
  for (int a = 0; a < i; ++a) k += g - 1 - a;
  return k + (j - i - 1);
}

std::pair<int, int> coord_pair(int g, int k) {
  if (k < g) return {k, k};
  int idx = g;
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j, ++idx)
      if (idx == k) return {i, j};
  throw InputError("coordinate position out of range");
}

QuadForm::QuadForm(int dim) : dim_(dim), coords_(coord_count(dim), Rational(0)) { check_length(); }

QuadForm::QuadForm(int dim, std::vector<Rational> coords) : dim_(dim), coords_(std::move(coords)) {
  check_length();
}

QuadForm::QuadForm(int dim, std::initializer_list<long> coords) : dim_(dim) {
  for (long c : coords) coords_.emplace_back(c);
  check_length();
}

void QuadForm::check_length() const {
  if (dim_ < 1 || dim_ > kMaxDim) throw InputError("form dimension must be in 1..4");
  if (static_cast<int>(coords_.size()) != coord_count(dim_))
    throw InputError("form of dimension " + std::to_string(dim_) + " needs " +
                     std::to_string(coord_count(dim_)) + " coordinates");
}

QuadForm QuadForm::from_gram(const RatMatrix& gram) {
  int g = static_cast<int>(gram.size());
  QuadForm q(g);
  for (int i = 0; i < g; ++i) {
    if (static_cast<int>(gram[i].size()) != g) throw InputError("Gram matrix not square");
    for (int j = i; j < g; ++j) {
      if (gram[i][j] != gram[j][i]) throw InputError("Gram matrix not symmetric");
      q.coords_[coord_index(g, i, j)] = gram[i][j];
    }
  }
  return q;
}

QuadForm QuadForm::unit(int dim, int i, int j) {
  QuadForm q(dim);
  q.coords_[coord_index(dim, i, j)] = 1;
  return q;
}

bool QuadForm::is_integral() const {
  for (const auto& c : coords_)
    if (!is_integer(c)) return false;
  return true;
}

bool QuadForm::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

RatMatrix QuadForm::gram() const {
  RatMatrix a = zeros(dim_, dim_);
  for (int k = 0; k < coord_count(dim_); ++k) {
    auto [i, j] = coord_pair(dim_, k);
    a[i][j] = coords_[k];
    a[j][i] = coords_[k];
  }
  return a;
}

Integer QuadForm::content() const {
  if (!is_integral()) throw InputError("content of a non-integral form");
  Integer g = 0;
  for (const auto& c : coords_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  return g;
}

QuadForm QuadForm::primitive() const {
  if (is_zero()) throw InputError("primitive generator of the zero form");
  IntVector dir = primitive_direction(coords_);
  return QuadForm(dim_, to_rational(dir));
}

QuadForm QuadForm::operator+(const QuadForm& o) const {
  if (dim_ != o.dim_) throw InputError("adding forms of different dimension");
  QuadForm r = *this;
  for (std::size_t k = 0; k < coords_.size(); ++k) r.coords_[k] += o.coords_[k];
  return r;
}

QuadForm& QuadForm::operator+=(const QuadForm& o) { return *this = *this + o; }

QuadForm QuadForm::operator-(const QuadForm& o) const { return *this + (-o); }

QuadForm QuadForm::operator-() const { return *this * Rational(-1); }

QuadForm QuadForm::operator*(const Rational& s) const {
  QuadForm r = *this;
  for (auto& c : r.coords_) c *= s;
  return r;
}

bool QuadForm::operator<(const QuadForm& o) const {
  if (dim_ != o.dim_) return dim_ < o.dim_;
  return coords_ < o.coords_;
}

LinearForm::LinearForm(std::vector<long> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_.size() > kMaxDim) throw InputError("linear form dimension must be in 1..4");
}

bool LinearForm::is_zero() const {
  for (long c : coeffs_)
    if (c) return false;
  return true;
}

bool LinearForm::is_primitive() const {
  long g = 0;
  for (long c : coeffs_) g = std::gcd(g, c);
  return g == 1;
}

LinearForm LinearForm::primitive() const {
  long g = 0;
  for (long c : coeffs_) g = std::gcd(g, c);
  if (g == 0) throw InputError("primitive of the zero linear form");
  std::vector<long> out;
  for (long c : coeffs_) out.push_back(c / g);
  return LinearForm(out);
}

LinearForm LinearForm::sign_normalized() const {
  for (long c : coeffs_) {
    if (c > 0) return *this;
    if (c < 0) return -*this;
  }
  return *this;
}

LinearForm LinearForm::operator-() const {
  std::vector<long> out;
  for (long c : coeffs_) out.push_back(-c);
  return LinearForm(out);
}

LinearForm LinearForm::operator+(const LinearForm& o) const {
  if (dim() != o.dim()) throw InputError("adding linear forms of different dimension");
  std::vector<long> out;
  for (int i = 0; i < dim(); ++i) out.push_back(coeffs_[i] + o.coeffs_[i]);
  return LinearForm(out);
}

LinearForm LinearForm::operator-(const LinearForm& o) const { return *this + (-o); }

namespace {

long int_det(std::vector<std::vector<long>> a) {
  RatMatrix r;
  for (auto& row : a) {
    RatVector v;
    for (long x : row) v.emplace_back(x);
    r.push_back(v);
  }
  Rational d = determinant(r);
  return d.get_num().get_si();
}

}  // namespace

LatticeMap::LatticeMap(std::vector<std::vector<long>> matrix) : matrix_(std::move(matrix)) {
  int g = dim();
  if (g < 1 || g > kMaxDim) throw InputError("lattice map dimension must be in 1..4");
  for (const auto& row : matrix_)
    if (static_cast<int>(row.size()) != g) throw InputError("lattice map matrix not square");
  det_ = int_det(matrix_);
  if (det_ == 0) throw InputError("lattice map is singular");
}

LatticeMap LatticeMap::identity(int dim) {
  std::vector<std::vector<long>> m(dim, std::vector<long>(dim, 0));
  for (int i = 0; i < dim; ++i) m[i][i] = 1;
  return LatticeMap(m);
}

RatMatrix LatticeMap::as_rational() const {
  RatMatrix r;
  for (const auto& row : matrix_) {
    RatVector v;
    for (long x : row) v.emplace_back(x);
    r.push_back(v);
  }
  return r;
}

LatticeMap LatticeMap::operator*(const LatticeMap& o) const {
  int g = dim();
  if (o.dim() != g) throw InputError("composing lattice maps of different dimension");
  std::vector<std::vector<long>> m(g, std::vector<long>(g, 0));
  for (int i = 0; i < g; ++i)
    for (int k = 0; k < g; ++k)
      for (int j = 0; j < g; ++j) m[i][j] += matrix_[i][k] * o.matrix_[k][j];
  return LatticeMap(m);
}

LatticeMap LatticeMap::inverse() const {
  auto inv = nefcone::inverse(as_rational());
  std::vector<std::vector<long>> m;
  for (const auto& row : *inv) {
    std::vector<long> r;
    for (const auto& x : row) {
      if (!is_integer(x)) throw InputError("lattice map is not unimodular");
      r.push_back(x.get_num().get_si());
    }
    m.push_back(r);
  }
  return LatticeMap(m);
}

std::vector<Rational> LatticeMap::apply(const std::vector<Rational>& v) const {
  return multiply(as_rational(), v);
}

LinearForm LatticeMap::apply(const LinearForm& l) const {
  // l(Mx) = sum_i l_i (row i . x)
  int g = dim();
  if (l.dim() != g) throw InputError("linear form dimension mismatch");
  std::vector<long> out(g, 0);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) out[j] += l[i] * matrix_[i][j];
  return LinearForm(out);
}

DualVector::DualVector(int dim, std::vector<Rational> coords) : dim_(dim), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != coord_count(dim_)) throw InputError("dual vector length mismatch");
}

DualVector::DualVector(int dim, std::initializer_list<long> coords) : dim_(dim) {
  for (long c : coords) coords_.emplace_back(c);
  if (static_cast<int>(coords_.size()) != coord_count(dim_)) throw InputError("dual vector length mismatch");
}

DualVector DualVector::unit(int dim, int i, int j) {
  std::vector<Rational> c(coord_count(dim), Rational(0));
  c[coord_index(dim, i, j)] = 1;
  return DualVector(dim, c);
}

Rational DualVector::pair(const QuadForm& q) const {
  if (q.dim() != dim_) throw InputError("pairing dimension mismatch");
  return dot(coords_, q.coords());
}

bool DualVector::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

DualVector DualVector::operator+(const DualVector& o) const {
  DualVector r = *this;
  for (std::size_t k = 0; k < coords_.size(); ++k) r.coords_[k] += o.coords_[k];
  return r;
}
DualVector DualVector::operator-(const DualVector& o) const { return *this + (-o); }
DualVector DualVector::operator-() const { return *this * Rational(-1); }
DualVector DualVector::operator*(const Rational& s) const {
  DualVector r = *this;
  for (auto& c : r.coords_) c *= s;
  return r;
}
bool DualVector::operator<(const DualVector& o) const {
  if (dim_ != o.dim_) return dim_ < o.dim_;
  return coords_ < o.coords_;
}

QuadForm square(const LinearForm& l) {
  if (l.is_zero()) throw InputError("square of the zero linear form");
  int g = l.dim();
  QuadForm q(g);
  std::vector<Rational> c(coord_count(g), Rational(0));
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) c[coord_index(g, i, j)] = Rational(l[i] * l[j]);
  return QuadForm(g, c);
}

Rational evaluate(const QuadForm& q, const std::vector<Rational>& v) {
  if (static_cast<int>(v.size()) != q.dim()) throw InputError("evaluate: dimension mismatch");
  int g = q.dim();
  Rational s = 0;
  for (int i = 0; i < g; ++i) {
    s += q.at(i, i) * v[i] * v[i];
    for (int j = i + 1; j < g; ++j) s += 2 * q.at(i, j) * v[i] * v[j];
  }
  return s;
}

PsdRank psd_rank(const QuadForm& q) {
  // Symmetric congruence diagonalisation A -> P^T A P with exact pivots.
  RatMatrix a = q.gram();
  int n = q.dim();
  int rank = 0;
  bool psd = true;
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (a[i][i] != 0) {
        p = i;
        break;
      }
    if (p < 0) {
      // All remaining diagonal entries vanish; a nonzero off-diagonal entry
      // means an indefinite 2x2 block.
      int r = -1, c = -1;
      for (int i = k; i < n && r < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (a[i][j] != 0) {
            r = i;
            c = j;
            break;
          }
      if (r < 0) break;
      psd = false;
      // x_r -> x_r + x_c creates a nonzero diagonal pivot 2 a_rc.
      for (int i = 0; i < n; ++i) a[i][r] += a[i][c];
      for (int j = 0; j < n; ++j) a[r][j] += a[c][j];
      p = r;
    }
    std::swap(a[p], a[k]);
    for (auto& row : a) std::swap(row[p], row[k]);
    Rational d = a[k][k];
    if (d < 0) psd = false;
    ++rank;
    for (int i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rational f = a[i][k] / d;
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
    for (int j = k + 1; j < n; ++j) a[k][j] = 0;
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[j][i] = a[i][j];
  }
  return {psd, rank};
}

QuadForm act(const LatticeMap& m, const QuadForm& q) {
  if (m.dim() != q.dim()) throw InputError("act: dimension mismatch");
  RatMatrix mm = m.as_rational();
  return QuadForm::from_gram(multiply(multiply(transpose(mm), q.gram()), mm));
}

QuadForm restrict_to(const QuadForm& q, const IntMatrix& vectors) {
  if (vectors.empty()) throw InputError("restriction to the zero lattice");
  RatMatrix b = zeros(q.dim(), vectors.size());
  for (std::size_t c = 0; c < vectors.size(); ++c) {
    if (static_cast<int>(vectors[c].size()) != q.dim()) throw InputError("restriction: vector length mismatch");
    for (int r = 0; r < q.dim(); ++r) b[r][c] = Rational(vectors[c][r]);
  }
  return QuadForm::from_gram(multiply(multiply(transpose(b), q.gram()), b));
}

QuadForm project(const QuadForm& q, int axis) {
  int g = q.dim();
  if (axis < 1 || axis > g) throw InputError("projection axis out of range");
  if (g == 1) throw InputError("cannot project a form of dimension 1");
  IntMatrix keep;
  for (int i = 0; i < g; ++i) {
    if (i == axis - 1) continue;
    IntVector v(g, Integer(0));
    v[i] = 1;
    keep.push_back(v);
  }
  return restrict_to(q, keep);
}

LinearForm project(const LinearForm& l, int axis) {
  if (axis < 1 || axis > l.dim()) throw InputError("projection axis out of range");
  std::vector<long> out;
  for (int i = 0; i < l.dim(); ++i)
    if (i != axis - 1) out.push_back(l[i]);
  return LinearForm(out);
}

const LatticeMap& psi() {
  static const LatticeMap m({{1, 1, 0, 0}, {1, -1, 0, 0}, {1, 0, -1, 0}, {1, 0, 0, -1}});
  return m;
}

Rational half_trace_prime(const QuadForm& q) {
  if (q.dim() != 4) throw InputError("half_trace_prime needs a form in 4 variables");
  QuadForm t = act(psi(), q);
  Rational tr = 0;
  for (int i = 0; i < 4; ++i) tr += t.at(i, i);
  return tr / 2;
}

KernelLattice kernel_lattice(const std::vector<QuadForm>& forms) {
  if (forms.empty()) throw InputError("kernel_lattice needs at least one form");
  int g = forms.front().dim();
  RatMatrix stacked;
  for (const auto& q : forms) {
    if (q.dim() != g) throw InputError("kernel_lattice: mixed dimensions");
    if (!psd_rank(q).is_psd) throw InputError("kernel_lattice: form is not positive semidefinite");
    for (const auto& row : q.gram()) stacked.push_back(row);
  }
  IntMatrix basis = integer_kernel(stacked, g);
  return {basis, static_cast<int>(basis.size())};
}

LatticeMap y_to_x(const RatMatrix& m_y) {
  RatMatrix p = psi().as_rational();
  auto pinv = nefcone::inverse(p);
  RatMatrix c = multiply(multiply(p, m_y), *pinv);
  std::vector<std::vector<long>> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<long> row;
    for (std::size_t j = 0; j < c[i].size(); ++j) {
      if (!is_integer(c[i][j])) {
        std::ostringstream msg;
        msg << "conjugated map is not integral: entry (" << i + 1 << "," << j + 1 << ") = " << to_string(c[i][j]);
        throw ComputationError(msg.str());
      }
      row.push_back(c[i][j].get_num().get_si());
    }
    out.push_back(row);
  }
  return LatticeMap(out);
}

std::optional<LinearForm> rank_one_root(const QuadForm& q) {
  if (q.is_zero()) return std::nullopt;
  RatMatrix a = q.gram();
  int g = q.dim();
  for (int i = 0; i < g; ++i) {
    if (a[i][i] == 0) continue;
    IntVector dir = primitive_direction(a[i]);
    std::vector<long> c;
    for (auto& x : dir) c.push_back(x.get_si());
    LinearForm l = LinearForm(c).sign_normalized();
    QuadForm s = square(l);
    Rational t = q.at(i, i) / s.at(i, i);
    if (s * t == q) return l;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace nefcone::forms
