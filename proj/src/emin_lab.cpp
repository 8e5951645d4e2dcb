#include "nefcone/emin_lab.hpp"

#include <algorithm>
#include <cstdint>
#include <thread>

namespace nefcone::emin {

namespace {

bool positive_definite(RatMatrix a) {
  std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    if (a[c][c] <= 0) return false;
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return true;
}

void check_gram(const RatMatrix& g) {
  std::size_t n = g.size();
  if (n == 0 || n > 4) throw InputError("Gram matrix must have size 1..4");
  for (const auto& row : g)
    if (row.size() != n) throw InputError("Gram matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g[i][j] != g[j][i]) throw InputError("Gram matrix is not symmetric");
  if (!positive_definite(g)) throw InputError("Gram matrix is not positive definite");
}

Rational quad(const RatMatrix& g, const RatVector& v) { return dot(v, multiply(g, v)); }

}  // namespace

ShiftedQuadMin min_shifted(const RatMatrix& gram, const RatVector& m) {
  check_gram(gram);
  std::size_t k = gram.size();
  if (m.size() != k) throw InputError("shift length does not match the Gram matrix");
  ShiftedQuadMin out;
  out.dim = static_cast<int>(k);
  out.gram = gram;
  out.shift = m;
  RatVector start(k);
  for (std::size_t i = 0; i < k; ++i) start[i] = m[i] - floor_q(m[i] + Rational(1, 2));
  out.bound = quad(gram, start);
  RatMatrix inv = *inverse(gram);
  for (std::size_t i = 0; i < k; ++i) {
    Rational r = sqrt_upper(out.bound * inv[i][i], Integer(1000));
    out.lo.push_back(ceil_q(-m[i] - r).get_num().get_si());
    out.hi.push_back(floor_q(-m[i] + r).get_num().get_si());
  }
  std::vector<long> q(out.lo);
  bool first = true;
  while (true) {
    RatVector v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = Rational(q[i]) + m[i];
    Rational val = quad(gram, v);
    if (first || val < out.value) {
      out.value = val;
      out.minimizers.clear();
      first = false;
    }
    if (val == out.value) out.minimizers.push_back(v);
    std::size_t i = 0;
    while (i < k && q[i] == out.hi[i]) q[i] = out.lo[i], ++i;
    if (i == k) break;
    ++q[i];
  }
  return out;
}

ShiftedQuadMin min_shifted_affine(const RatMatrix& gram, const RatVector& linear, const Rational& constant,
                                  const RatVector& m) {
  check_gram(gram);
  std::size_t k = gram.size();
  if (linear.size() != k) throw InputError("linear part length does not match the Gram matrix");
  // Q(w) + L.w + c = Q(w - w0) + c - Q(w0) with w0 = -G^-1 L / 2.
  RatVector w0 = multiply(*inverse(gram), linear);
  for (auto& x : w0) x = -x / 2;
  RatVector shifted(k);
  for (std::size_t i = 0; i < k; ++i) shifted[i] = m[i] - w0[i];
  ShiftedQuadMin r = min_shifted(gram, shifted);
  Rational offset = constant - quad(gram, w0);
  r.value += offset;
  r.bound += offset;
  r.shift = m;
  for (auto& v : r.minimizers)
    for (std::size_t i = 0; i < k; ++i) v[i] += w0[i];
  return r;
}

ShiftedQuadMin min_over_shift_grid(const RatMatrix& gram, const RatVector& linear, const Rational& constant,
                                   int denominator) {
  if (denominator < 1) throw InputError("shift grid denominator must be positive");
  std::size_t k = gram.size();
  std::vector<int> idx(k, 0);
  std::optional<ShiftedQuadMin> best;
  while (true) {
    RatVector m(k);
    for (std::size_t i = 0; i < k; ++i) {
      m[i] = Rational(idx[i], denominator);
      m[i].canonicalize();
    }
    ShiftedQuadMin r = min_shifted_affine(gram, linear, constant, m);
    if (!best || r.value < best->value) {
      best = r;
    } else if (r.value == best->value) {
      best->minimizers.insert(best->minimizers.end(), r.minimizers.begin(), r.minimizers.end());
    }
    std::size_t i = 0;
    while (i < k && ++idx[i] == denominator) idx[i++] = 0;
    if (i == k) break;
  }
  std::sort(best->minimizers.begin(), best->minimizers.end());
  best->shift.assign(k, Rational(0));
  return *best;
}

const RatMatrix& e_gram() {
  static const RatMatrix g = [] {
    std::vector<std::vector<int>> v{{2, 1, -1, -1}, {1, 2, -1, -1}, {-1, -1, 2, 0}, {-1, -1, 0, 2}};
    RatMatrix m;
    for (const auto& row : v) {
      RatVector r;
      for (int x : row) r.push_back(Rational(x) / 2);
      m.push_back(r);
    }
    return m;
  }();
  return g;
}

Rational emin(const RatVector& x) {
  if (x.size() != 4) throw InputError("emin takes a point of R^4");
  return min_shifted(e_gram(), x).value;
}

namespace {

// 2 s^2 e(q + v/s) with v = s q + a.
std::int64_t scaled_e(std::int64_t v1, std::int64_t v2, std::int64_t v3, std::int64_t v4) {
  return 2 * (v1 * v1 + v2 * v2 + v3 * v3 + v4 * v4) + 2 * v1 * v2 - 2 * v1 * v3 - 2 * v1 * v4 - 2 * v2 * v3 -
         2 * v2 * v4;
}

// Exhaustive minimum over q in [-2, 2]^4; complete because 2e <= 9/2 on the
// reduced box and the inverse of the doubled Gram has unit diagonal.
std::int64_t wide_min(std::int64_t s, std::int64_t a1, std::int64_t a2, std::int64_t a3, std::int64_t a4) {
  std::int64_t best = INT64_MAX;
  for (int q1 = -2; q1 <= 2; ++q1)
    for (int q2 = -2; q2 <= 2; ++q2)
      for (int q3 = -2; q3 <= 2; ++q3)
        for (int q4 = -2; q4 <= 2; ++q4)
          best = std::min(best, scaled_e(s * q1 + a1, s * q2 + a2, s * q3 + a3, s * q4 + a4));
  return best;
}

struct Partial {
  std::int64_t sum = 0;
  long fallback = 0;
};

}  // namespace

QuadratureResult grid_mean(int n, const QuadratureOptions& opts) {
  if (n < 1) throw InputError("grid size must be at least 1");
  if (n > 2000) throw InputError("grid size too large for the 32-bit kernel");
  if (opts.threads < 1) throw InputError("thread count must be at least 1");
  kernels::Isa isa = opts.isa.value_or(kernels::best_isa());
  if (isa == kernels::Isa::Avx2 && !kernels::avx2_available()) isa = kernels::Isa::Scalar;
  const std::int32_t s = 2 * n;
  std::vector<std::int32_t> a(n);
  for (int k = 0; k < n; ++k) a[k] = (2 * k + 1 > n) ? 2 * k + 1 - 2 * n : 2 * k + 1;
  const std::int64_t limit = 9LL * s * s;  // kernel result valid when 4 * min < 9 s^2
  const long rows = static_cast<long>(n) * n * n;

  auto work = [&](long begin, long end, Partial& acc) {
    std::vector<std::int32_t> out(n);
    for (long r = begin; r < end; ++r) {
      long mirror = rows - 1 - r;
      if (opts.use_symmetry && r > mirror) continue;
      int k1 = static_cast<int>(r / (static_cast<long>(n) * n)), k2 = static_cast<int>((r / n) % n), k3 = static_cast<int>(r % n);
      kernels::Row row{s, a[k1], a[k2], a[k3], a.data(), n};
      kernels::row_min(isa, row, out.data());
      for (int j = 0; j < n; ++j) {
        std::int64_t v = out[j];
        if (4 * v >= limit) {
          v = wide_min(s, a[k1], a[k2], a[k3], a[j]);
          ++acc.fallback;
        }
        std::int64_t w = 1;
        if (opts.use_symmetry) {
          if (r < mirror) {
            w = 2;
          } else {
            int jm = n - 1 - j;
            if (j > jm) continue;
            w = j < jm ? 2 : 1;
          }
        }
        acc.sum += w * v;
      }
    }
  };

  int threads = std::min<long>(opts.threads, rows);
  std::vector<Partial> parts(threads);
  std::vector<std::thread> pool;
  long chunk = (rows + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    long b = t * chunk, e = std::min(rows, b + chunk);
    if (t == 0) continue;
    pool.emplace_back(work, b, e, std::ref(parts[t]));
  }
  work(0, std::min(rows, chunk), parts[0]);
  for (auto& th : pool) th.join();

  QuadratureResult res;
  res.n = n;
  res.isa = kernels::to_string(isa);
  std::int64_t total = 0;
  for (const auto& p : parts) {
    total += p.sum;
    res.fallback_points += p.fallback;
  }
  res.scaled_sum = Integer(static_cast<long>(total));
  Integer points = Integer(n) * n * n * n;
  res.mean = Rational(res.scaled_sum, 2 * points * s * s);
  res.mean.canonicalize();
  res.mean_float = render_float(res.mean, 7);
  return res;
}

ErrorCertificate error_certificate(const QuadratureResult& q) {
  ErrorCertificate c;
  c.n = q.n;
  Rational h(1, q.n);
  Integer scale(1000000000);
  Rational sqrt_third = sqrt_upper(Rational(1, 3), scale);
  Rational sqrt_mean = sqrt_upper(q.mean, scale);
  c.bound = 2 * h * sqrt_third * sqrt_mean + Rational(1, 3) * h * h;
  c.derivation =
      "sqrt(emin) is 1-Lipschitz in the e-norm, so |emin(x) - emin(c)| <= 2 sqrt(emin(c)) |x-c|_e + e(x-c); "
      "averaging over a cell of side h = 1/N gives mean e(x-c) = h^2/3 and mean |x-c|_e <= h/sqrt(3); "
      "summing over cells and using mean sqrt(emin) <= sqrt(mean emin) gives "
      "2 h sqrt(1/3) sqrt(mean) + h^2/3 with rational upper bounds for the square roots";
  return c;
}

ErrorCertificate error_certificate(int n, const QuadratureOptions& opts) { return error_certificate(grid_mean(n, opts)); }

Margin weissauer_margin(int n, const QuadratureOptions& opts) {
  Margin m;
  m.quadrature = grid_mean(n, opts);
  m.certificate = error_certificate(m.quadrature);
  m.margin = m.quadrature.mean - Rational(3, 16);
  m.certified_margin = m.margin - m.certificate.bound;
  m.conjectural_value = Rational(13, 60);
  m.conjectural_limit = Rational(13, 60) - Rational(3, 16);
  m.distance_conjectural = abs(m.quadrature.mean - m.conjectural_value);
  if (m.certified_margin <= 0)
    throw InputError("error bound at N=" + std::to_string(n) + " is too large to certify a positive margin; use a larger N");
  return m;
}

std::string render_float(const Rational& r, int significant) {
  if (significant < 1) throw InputError("need at least one significant digit");
  if (r == 0) return "0";
  Rational x = abs(r);
  int e = 0;  // 10^(e-1) <= x < 10^e
  Rational p = 1;
  while (x >= p) {
    p *= 10;
    ++e;
  }
  while (x < p / 10) {
    p /= 10;
    --e;
  }
  Rational scaled = x;
  int shift = significant - e;
  for (int i = 0; i < shift; ++i) scaled *= 10;
  for (int i = 0; i > shift; --i) scaled /= 10;
  Integer digits = floor_q(scaled + Rational(1, 2)).get_num();
  Integer limit = 1;
  for (int i = 0; i < significant; ++i) limit *= 10;
  if (digits == limit) {
    digits /= 10;
    --shift;
  }
  std::string d = digits.get_str();
  std::string out;
  if (shift <= 0) {
    out = d + std::string(-shift, '0');
  } else if (static_cast<int>(d.size()) > shift) {
    out = d.substr(0, d.size() - shift) + "." + d.substr(d.size() - shift);
  } else {
    out = "0." + std::string(shift - d.size(), '0') + d;
  }
  return (r < 0 ? "-" : "") + out;
}

}  // namespace nefcone::emin
