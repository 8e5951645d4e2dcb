#include "nefcone/linalg.hpp"

#include <utility>

namespace nefcone {

RatMatrix zeros(std::size_t rows, std::size_t cols) {
  return RatMatrix(rows, RatVector(cols, Rational(0)));
}

RatMatrix identity_matrix(std::size_t n) {
  RatMatrix m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RatMatrix transpose(const RatMatrix& a) {
  if (a.empty()) return {};
  RatMatrix t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
  if (a.empty()) return {};
  std::size_t inner = b.size();
  std::size_t cols = b.empty() ? 0 : b[0].size();
  if (a[0].size() != inner) throw InputError("matrix product: shape mismatch");
  RatMatrix c = zeros(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

RatVector multiply(const RatMatrix& a, const RatVector& v) {
  RatVector out(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != v.size()) throw InputError("matrix-vector product: shape mismatch");
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  }
  return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw InputError("dot product: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RowEchelon rref(RatMatrix a) {
  RowEchelon out;
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    out.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  a.resize(r);
  out.reduced = std::move(a);
  return out;
}

int rank(const RatMatrix& a) { return static_cast<int>(rref(a).pivots.size()); }

Rational determinant(RatMatrix a) {
  std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
  std::size_t n = a.size();
  RatMatrix aug = zeros(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  RowEchelon e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != static_cast<int>(n - 1)) return std::nullopt;
  RatMatrix inv = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.reduced[i][n + j];
  return inv;
}

std::vector<RatVector> nullspace(const RatMatrix& a, std::size_t cols) {
  std::vector<RatVector> basis;
  if (a.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      RatVector v(cols, Rational(0));
      v[j] = 1;
      basis.push_back(v);
    }
    return basis;
  }
  RowEchelon e = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced[r][f];
    basis.push_back(v);
  }
  return basis;
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
  std::size_t cols = a.empty() ? 0 : a[0].size();
  RatMatrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  RowEchelon e = rref(aug);
  RatVector x(cols, Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == static_cast<int>(cols)) return std::nullopt;
    x[e.pivots[r]] = e.reduced[r][cols];
  }
  return x;
}

namespace {

IntMatrix to_integer_rows(const RatMatrix& a) {
  IntMatrix out;
  for (const auto& row : a) {
    Integer l = 1;
    for (const auto& x : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntVector r;
    for (const auto& x : row) {
      Rational y = x * l;
      r.push_back(y.get_num());
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

IntMatrix integer_kernel(const RatMatrix& a, std::size_t n) {
  // Unimodular column reduction a*U = H; the columns of U that end up paired
  // with zero columns of H form a Z-basis of the integer kernel.
  IntMatrix h = to_integer_rows(a);
  IntMatrix u(n, IntVector(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  std::size_t rows = h.size();
  auto col_op = [&](std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t i = 0; i < rows; ++i) h[i][dst] -= f * h[i][src];
    for (std::size_t i = 0; i < n; ++i) u[i][dst] -= f * u[i][src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < rows; ++i) std::swap(h[i][x], h[i][y]);
    for (std::size_t i = 0; i < n; ++i) std::swap(u[i][x], u[i][y]);
  };
  std::size_t lead = 0;
  for (std::size_t r = 0; r < rows && lead < n; ++r) {
    while (true) {
      std::size_t best = n;
      for (std::size_t c = lead; c < n; ++c) {
        if (h[r][c] == 0) continue;
        if (best == n || abs(h[r][c]) < abs(h[r][best])) best = c;
      }
      if (best == n) break;
      col_swap(lead, best);
      bool done = true;
      for (std::size_t c = lead + 1; c < n; ++c) {
        if (h[r][c] == 0) continue;
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), h[r][c].get_mpz_t(), h[r][lead].get_mpz_t());
        col_op(c, lead, f);
        if (h[r][c] != 0) done = false;
      }
      if (done) {
        ++lead;
        break;
      }
    }
  }
  IntMatrix basis;
  for (std::size_t c = lead; c < n; ++c) {
    IntVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i][c];
    basis.push_back(v);
  }
  return basis;
}

IntVector primitive_direction(const RatVector& v) {
  Integer l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  IntVector out;
  Integer g = 0;
  for (const auto& x : v) {
    Rational y = x * l;
    out.push_back(y.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  if (g == 0) throw InputError("primitive_direction of the zero vector");
  for (auto& x : out) x /= g;
  return out;
}

RatVector to_rational(const IntVector& v) {
  RatVector out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

}  // namespace nefcone
