#include <doctest.h>

#include "nefcone/nef_certify.hpp"
#include "nefcone/wall_calculus.hpp"
#include "test_util.hpp"

using namespace nefcone;
using namespace nefcone::nef;

namespace {

// The two closed regions written out directly, level 1.
bool d4_region(const Rational& a, const Rational& b, const Rational& c) { return a >= 12 * b && b >= 2 * c && c >= 0; }
bool vor_region(const Rational& al, const Rational& be, const Rational& ga) {
  return be >= 0 && al >= 12 * be && ga >= 4 * be && 4 * be >= Rational(8, 9) * ga;
}

// b coefficient of the depth bound from summed case data with a single #K.
Rational oracle_b(int mu, int k, const Rational& sum_delta, const Rational& sum_gamma) {
  Integer f = 1;
  for (int i = 2; i <= mu; ++i) f *= i;
  Rational beta1 = Rational(1) / (Rational(mu - 1) * f);
  Rational beta2 = Rational(mu) / (Rational(mu - 1) * f);
  Rational w = beta2 / (k - 1);
  Rational r = Rational(4, mu - 1) - beta1 * sum_delta - w * sum_delta + w * sum_gamma;
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("is_nef examples") {
  auto v = is_nef(make_class(Basis::VOR_D4, 24, 2, 1, 1));
  CHECK(v.nef);
  CHECK(v.active() == std::vector<std::string>{"a - 12b/n >= 0", "b - 2c >= 0"});
  CHECK_FALSE(is_nef(make_class(Basis::VOR_D4, 12, 1, 1, 1)).nef);
  CHECK(is_nef(make_class(Basis::VOR_D4, 12, 1, 1, 1)).violated() == std::vector<std::string>{"b - 2c >= 0"});
  for (int n = 1; n <= 12; ++n) CHECK_FALSE(is_nef(make_class(Basis::VOR, 5, 1, 1, n)).nef);
  CHECK(is_nef(make_class(Basis::IGU, 12, 1, 0, 1)).nef);
  CHECK_FALSE(is_ample_interior(make_class(Basis::IGU, 12, 1, 0, 1)));
  CHECK(is_ample_interior(make_class(Basis::IGU, 5, 1, 0, 3)));
  CHECK_FALSE(is_ample_interior(make_class(Basis::IGU, 5, 1, 0, 2)));
  CHECK_THROWS_AS(is_ample_interior(make_class(Basis::VOR, 5, 1, 1, 3)), InputError);
  CHECK_THROWS_AS(make_class(Basis::IGU, 1, 1, 1, 1), InputError);
  CHECK_THROWS_AS(make_class(Basis::VOR, 1, 1, 1, 0), InputError);
}

TEST_CASE("basis parsing and conversion") {
  CHECK(parse_basis("igusa") == Basis::IGU);
  CHECK(parse_basis("voronoi") == Basis::VOR);
  CHECK(parse_basis("vor-d4") == Basis::VOR_D4);
  CHECK_THROWS_AS(parse_basis("satake"), InputError);
  auto d = make_class(Basis::VOR_D4, 7, 3, Rational(1, 2), 2);
  auto v = convert_basis(d, Basis::VOR);
  CHECK(v.c == Rational(25, 2));
  CHECK(convert_basis(v, Basis::VOR_D4) == d);
  CHECK(convert_basis(d, Basis::VOR_D4) == d);
  CHECK_THROWS_AS(convert_basis(d, Basis::IGU), InputError);
  CHECK(convert_basis(canonical_class(Basis::VOR_D4, 1), Basis::VOR) == canonical_class(Basis::VOR, 1));
}

TEST_CASE("region equivalence on a 50^3 grid") {
  // a in [0, 49], b and c in [-10, 39]/4
  long checked = 0, inside = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j)
      for (int k = 0; k < 50; ++k) {
        Rational a(i), b(j - 10, 4), c(k - 10, 4);
        b.canonicalize(), c.canonicalize();
        auto d = make_class(Basis::VOR_D4, a, b, c, 1);
        auto v = convert_basis(d, Basis::VOR);
        bool lhs = is_nef(d).nef, rhs = is_nef(v).nef;
        CHECK(lhs == rhs);
        CHECK(lhs == d4_region(a, b, c));
        CHECK(rhs == vor_region(v.a, v.b, v.c));
        ++checked;
        inside += lhs;
      }
  CHECK(checked == 125000);
  CHECK(inside > 0);
}

TEST_CASE("property: is_nef is scale invariant and respects the walls") {
  testutil::Gen gen(11);
  for (int trial = 0; trial < 400; ++trial) {
    auto x = gen.vec(4, 30, 6);
    int level = static_cast<int>(gen.integer(1, 8));
    Rational lambda = gen.rational(20, 9);
    lambda = abs(lambda) + Rational(1, 7);
    lambda.canonicalize();
    for (Basis basis : {Basis::IGU, Basis::VOR_D4, Basis::VOR}) {
      Rational c = basis == Basis::IGU ? Rational(0) : x[2];
      auto d = make_class(basis, x[0], x[1], c, level);
      auto s = make_class(basis, lambda * x[0], lambda * x[1], lambda * c, level);
      CHECK(is_nef(d).nef == is_nef(s).nef);
    }
    auto d = make_class(Basis::VOR_D4, x[0], x[1], x[2], level);
    if (is_nef(d).nef) {
      CHECK(walls::depth4_pairing(d.a, d.b, d.c, "sigma0") >= 0);
      CHECK(walls::depth4_pairing(d.a, d.b, d.c, "sigma1") >= 0);
    }
  }
}

TEST_CASE("canonical classes") {
  for (int n = 1; n <= 20; ++n) {
    auto k = canonical_class(Basis::IGU, n);
    CHECK(k.a == 5);
    CHECK(k.b == 1);
    CHECK(is_nef(k).nef == (n >= 3));
    CHECK(is_ample_interior(k) == (n >= 3));
    CHECK_FALSE(is_nef(canonical_class(Basis::VOR, n)).nef);
    CHECK_FALSE(is_nef(canonical_class(Basis::VOR_D4, n)).nef);
  }
  auto kv = canonical_class(Basis::VOR_D4, 5);
  CHECK(kv.c == -3);
  CHECK(default_epsilon() == Rational(1, 100));
}

TEST_CASE("depth bounds") {
  // summed case data for mu = 3 faces, #K = 2
  CHECK(oracle_b(3, 2, 12, 16) == 2);
  CHECK(oracle_b(3, 2, 12, 12) == 1);
  auto string = depth3_bound("string");
  CHECK(string.bound.b_coefficient == oracle_b(3, 2, 12, 16));
  CHECK(string.bound.form() == "2*b - c");
  CHECK(depth3_bound("bf").bound.form() == "b - c");
  CHECK(depth3_bound("mu4").bound.b_coefficient == Rational(2, 3));
  CHECK(depth3_bound("mu5").bound.b_coefficient == Rational(1, 2));
  CHECK(*depth3_bound("disconnected").bound.threshold == Rational(3, 4));
  auto mu6 = depth3_bound("mu6");
  CHECK(*mu6.bound.threshold == Rational(75, 46));
  CHECK(*mu6.bound.threshold < 2);
  for (const auto& name : depth3_case_names()) {
    auto b = depth3_bound(name).bound;
    REQUIRE(b.threshold.has_value());
    CHECK(*b.threshold <= 2);
  }
  CHECK_THROWS_AS(depth3_bound("mu7"), InputError);
}

TEST_CASE("depth_bound validation") {
  DepthCase two;
  two.gamma = 2, two.delta = 2, two.count = 6;
  CHECK(depth_bound(3, {two}).b_coefficient == oracle_b(3, 2, 12, 12));
  CHECK_THROWS_AS(depth_bound(2, {two}), InputError);
  CHECK_THROWS_AS(depth_bound(4, {two}), InputError);
  DepthCase three = two;
  three.k_size = 3;
  CHECK_THROWS_AS(depth_bound(3, {three}), InputError);
  CHECK_THROWS_AS(depth_bound(6, {two}), InputError);
  DepthCase neg = two;
  neg.gamma = -1;
  CHECK_THROWS_AS(depth_bound(3, {neg}), InputError);
  // gamma far below delta leaves no positive coefficient
  DepthCase low = two;
  low.gamma = 0, low.delta = 6;
  CHECK_FALSE(depth_bound(3, {low}).threshold.has_value());
}
