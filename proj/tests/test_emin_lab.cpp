#include <doctest.h>

#include <cstdint>

#include "nefcone/cone_atlas.hpp"
#include "nefcone/emin_lab.hpp"
#include "test_util.hpp"

using namespace nefcone;
using nefcone::emin::e_gram;
using nefcone::emin::error_certificate;
using nefcone::emin::grid_mean;
using nefcone::emin::min_over_shift_grid;
using nefcone::emin::min_shifted;
using nefcone::emin::QuadratureOptions;
using nefcone::emin::render_float;
using nefcone::emin::weissauer_margin;
namespace kernels = nefcone::emin::kernels;

namespace {

Rational emin_at(const RatVector& x) { return nefcone::emin::emin(x); }

Rational quad(const RatMatrix& g, const RatVector& v) { return dot(v, multiply(g, v)); }

// Naive minimum over q in [-r, r]^k.
Rational brute_min(const RatMatrix& g, const RatVector& m, int r) {
  std::size_t k = m.size();
  std::vector<int> q(k, -r);
  Rational best;
  bool first = true;
  while (true) {
    RatVector v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = m[i] + q[i];
    Rational val = quad(g, v);
    if (first || val < best) best = val, first = false;
    std::size_t i = 0;
    while (i < k && q[i] == r) q[i++] = -r;
    if (i == k) break;
    ++q[i];
  }
  return best;
}

// e in integer form, the Gram of emin scaled by 2
std::int64_t e_int(const std::int64_t* v) {
  return 2 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]) + 2 * v[0] * v[1] - 2 * v[0] * v[2] -
         2 * v[0] * v[3] - 2 * v[1] * v[2] - 2 * v[1] * v[3];
}

// Exact grid mean by brute force over q in [-2, 2]^4 in integer arithmetic.
Rational oracle_grid_mean(int n) {
  std::int64_t s = 2 * n;
  Integer total = 0;
  std::int64_t a[4];
  for (a[0] = 0; a[0] < n; ++a[0])
    for (a[1] = 0; a[1] < n; ++a[1])
      for (a[2] = 0; a[2] < n; ++a[2])
        for (a[3] = 0; a[3] < n; ++a[3]) {
          std::int64_t best = INT64_MAX;
          for (int q0 = -2; q0 <= 2; ++q0)
            for (int q1 = -2; q1 <= 2; ++q1)
              for (int q2 = -2; q2 <= 2; ++q2)
                for (int q3 = -2; q3 <= 2; ++q3) {
                  std::int64_t v[4] = {s * q0 + 2 * a[0] + 1, s * q1 + 2 * a[1] + 1, s * q2 + 2 * a[2] + 1,
                                       s * q3 + 2 * a[3] + 1};
                  best = std::min(best, e_int(v));
                }
          total += Integer(static_cast<long>(best));
        }
  Integer n4 = Integer(n) * n * n * n;
  Rational mean(total, Integer(2 * s * s) * n4);
  mean.canonicalize();
  return mean;
}

RatMatrix gram3(std::initializer_list<std::initializer_list<Rational>> rows) {
  RatMatrix m;
  for (auto r : rows) m.emplace_back(r);
  return m;
}

}  // namespace

TEST_CASE("emin values") {
  CHECK(emin_at({0, 0, 0, 0}) == 0);
  RatVector half(4, Rational(1, 2));
  CHECK(emin_at(half) == brute_min(e_gram(), half, 3));
  CHECK(emin_at(half) == Rational(1, 4));
  CHECK(emin_at({1, -2, 3, 0}) == 0);
  auto r = min_shifted(e_gram(), half);
  for (const auto& v : r.minimizers) CHECK(quad(e_gram(), v) == r.value);
  CHECK(r.minimizers.size() > 1);
}

TEST_CASE("property: min_shifted agrees with brute force on 500 shifts") {
  testutil::Gen gen(500);
  for (int trial = 0; trial < 500; ++trial) {
    RatVector m;
    for (int i = 0; i < 4; ++i) {
      Rational x(gen.integer(-40, 40), gen.integer(1, 20));
      x.canonicalize();
      m.push_back(x);
    }
    auto r = min_shifted(e_gram(), m);
    // the brute-force box is centred at the rounded shift
    RatVector frac(4);
    for (int i = 0; i < 4; ++i) frac[i] = m[i] - floor_q(m[i]);
    CHECK(r.value == brute_min(e_gram(), frac, 3));
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(r.lo[i] <= r.hi[i]);
    }
  }
}

TEST_CASE("property: emin symmetries") {
  testutil::Gen gen(17);
  const auto& g = cone_atlas::group_g();
  for (int trial = 0; trial < 100; ++trial) {
    RatVector x = gen.vec(4, 30, 12);
    Rational v = emin_at(x);
    RatVector neg(4), moved(4);
    for (int i = 0; i < 4; ++i) neg[i] = -x[i], moved[i] = x[i] + gen.integer(-3, 3);
    CHECK(emin_at(neg) == v);
    CHECK(emin_at(moved) == v);
    RatVector frac(4);
    for (int i = 0; i < 4; ++i) frac[i] = x[i] - floor_q(x[i]);
    CHECK(v >= 0);
    CHECK(v <= quad(e_gram(), frac));
    bool integral = std::all_of(x.begin(), x.end(), [](const Rational& c) { return is_integer(c); });
    CHECK((v == 0) == integral);
  }
  // stabiliser of e acts on shifts without changing the value
  for (int trial = 0; trial < 20; ++trial) {
    RatVector x = gen.vec(4, 10, 7);
    Rational v = emin_at(x);
    for (const auto& m : g.elements()) {
      // e(M y) = e(y), so emin_at(M^-1 x) = emin_at(x)
      CHECK(emin_at(m.inverse().apply(x)) == v);
    }
  }
}

TEST_CASE("min_shifted input validation") {
  CHECK_THROWS_AS(min_shifted(gram3({{1, 2}, {2, 1}}), {0, 0}), InputError);
  CHECK_THROWS_AS(min_shifted(gram3({{1, 0}, {1, 1}}), {0, 0}), InputError);
  CHECK_THROWS_AS(min_shifted(gram3({{1}}), {0, 0}), InputError);
  auto zero = min_shifted(e_gram(), {0, 0, 0, 0});
  CHECK(zero.value == 0);
  REQUIRE(zero.minimizers.size() == 1);
}

TEST_CASE("theta exponent minima") {
  // w2 - w2 w4 - w3 - w4 - w2 w3 + w2^2 + w3^2 + w4^2
  RatMatrix g = gram3({{1, Rational(-1, 2), Rational(-1, 2)}, {Rational(-1, 2), 1, 0}, {Rational(-1, 2), 0, 1}});
  auto r = min_over_shift_grid(g, {1, -1, -1}, 0, 2);
  CHECK(r.value == Rational(-1, 2));
  REQUIRE(r.minimizers.size() == 1);
  CHECK(r.minimizers[0] == RatVector{0, Rational(1, 2), Rational(1, 2)});
  // w3^2 + w4^2 - w3 - w4
  auto w = min_over_shift_grid(gram3({{1, 0}, {0, 1}}), {-1, -1}, 0, 2);
  CHECK(w.value == Rational(-1, 2));
  REQUIRE(w.minimizers.size() == 1);
  CHECK(w.minimizers[0] == RatVector{Rational(1, 2), Rational(1, 2)});
  // on the integer lattice alone the minimum is 0
  CHECK(min_over_shift_grid(gram3({{1, 0}, {0, 1}}), {-1, -1}, 0, 1).value == 0);
  CHECK_THROWS_AS(min_over_shift_grid(g, {1, -1, -1}, 0, 0), InputError);
}

TEST_CASE("grid means") {
  CHECK(grid_mean(1).mean == Rational(1, 4));
  auto q9 = grid_mean(9);
  CHECK(q9.mean == Rational(17059, 78732));
  CHECK(q9.mean == oracle_grid_mean(9));
  CHECK(grid_mean(4).mean == oracle_grid_mean(4));
  CHECK(q9.mean_float == "0.2166717");
  CHECK_THROWS_AS(grid_mean(0), InputError);
}

TEST_CASE("quadrature is schedule independent") {
  for (int n : {7, 10}) {
    QuadratureOptions serial;
    auto ref = grid_mean(n, serial);
    for (int threads : {2, 3, 8}) {
      QuadratureOptions o;
      o.threads = threads;
      auto r = grid_mean(n, o);
      CHECK(r.mean == ref.mean);
      CHECK(r.scaled_sum == ref.scaled_sum);
    }
    QuadratureOptions plain;
    plain.use_symmetry = false;
    plain.isa = kernels::Isa::Scalar;
    CHECK(grid_mean(n, plain).mean == ref.mean);
  }
}

TEST_CASE("error certificate") {
  auto c1 = error_certificate(1);
  CHECK(c1.bound >= grid_mean(1).mean);
  auto c9 = error_certificate(9);
  CHECK(c9.bound > 0);
  CHECK(c9.bound < c1.bound);
  CHECK_FALSE(c9.derivation.empty());
  CHECK_THROWS_AS(weissauer_margin(9), InputError);
}

TEST_CASE("render_float") {
  CHECK(render_float(Rational(13, 60), 7) == "0.2166667");
  CHECK(render_float(Rational(3, 16), 7) == "0.1875000");
  CHECK(render_float(Rational(-1, 3), 3) == "-0.333");
  CHECK(render_float(Rational(0), 4) == "0");
}
