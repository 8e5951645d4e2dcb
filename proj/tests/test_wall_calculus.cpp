#include <doctest.h>

#include "nefcone/cone_atlas.hpp"
#include "nefcone/form_text.hpp"
#include "nefcone/wall_calculus.hpp"

using namespace nefcone;
using namespace nefcone::walls;

namespace {

Integer sum_a(const WallRelation& w) {
  Integer s = 0;
  for (const auto& x : w.a) s += x;
  return s;
}

// Independent check of a relation: plug it back into the forms.
bool relation_holds(const WallRelation& w) {
  QuadForm t = w.u * Rational(w.alpha) + w.u_prime * Rational(w.alpha_prime);
  for (std::size_t i = 0; i < w.facet.size(); ++i) t += w.facet[i] * Rational(w.a[i]);
  return t.is_zero();
}

}  // namespace

TEST_CASE("sigma0 wall") {
  auto w = named_wall("sigma0");
  CHECK(relation_holds(w));
  CHECK(w.alpha == 1);
  CHECK(w.alpha_prime == 1);
  for (const auto& x : w.a) CHECK(x == -1);
  CHECK(curve_intersection(w, DivisorAssignment::d4()) == -1);
  CHECK(curve_intersection(w, DivisorAssignment::e()) == 2);
  CHECK(curve_intersection(w, DivisorAssignment::d_vor()) == -9);
  // half trace values 1 (nine times), 4 and 5
  CHECK(forms::half_trace_prime(w.u) == 4);
  CHECK(forms::half_trace_prime(w.u_prime) == 5);
  CHECK(w.coefficient(cone_atlas::atlas().form("x1^2")) == -1);
  CHECK(w.coefficient(cone_atlas::atlas().form("(x1+x2-x3)^2")) == 0);
}

TEST_CASE("sigma1 wall") {
  auto w = named_wall("sigma1");
  CHECK(relation_holds(w));
  CHECK(w.alpha == 1);
  CHECK(w.alpha_prime == 1);
  CHECK(sum_a(w) == -6);
  CHECK(curve_intersection(w, DivisorAssignment::d4()) == -1);
  CHECK(curve_intersection(w, DivisorAssignment::e()) == 1);
  CHECK_THROWS_AS(named_wall("sigma2"), InputError);
}

TEST_CASE("depth-4 pairings") {
  CHECK(depth4_pairing(0, 1, 0, "sigma0") == 1);
  CHECK(depth4_pairing(0, 2, 1, "sigma0") == 0);
  CHECK(depth4_pairing(0, 1, 1, "sigma1") == 0);
  // b - 2c and b - c as linear forms, independent of a
  for (int b = -3; b <= 3; ++b)
    for (int c = -3; c <= 3; ++c) {
      CHECK(depth4_pairing(7, b, c, "sigma0") == Rational(b - 2 * c));
      CHECK(depth4_pairing(-2, b, c, "sigma1") == Rational(b - c));
    }
}

TEST_CASE("principal relations of half trace") {
  auto htp = [](const QuadForm& q) { return forms::half_trace_prime(q); };
  for (const std::string which : {"sigma0", "sigma1"}) {
    auto w = named_wall(which);
    std::vector<QuadForm> rays = w.facet;
    rays.push_back(w.u);
    rays.push_back(w.u_prime);
    auto p = principal_relation(htp, rays);
    for (std::size_t i = 0; i < 9; ++i) CHECK(p.coefficients[i] == 1);
    CHECK(p.coefficients[9] == 4);
    CHECK(p.coefficients[10] == (which == "sigma0" ? 5 : 2));
    CHECK(pair(p, w) == 0);
    // pairing the D4 multiplicities against the wall gives D4.C
    auto d4 = principal_relation([](const QuadForm& q) { return DivisorAssignment::d4()(q); }, rays);
    CHECK(pair(d4, w) == curve_intersection(w, DivisorAssignment::d4()));
  }
}

TEST_CASE("divisor assignments are linear") {
  for (const std::string which : {"sigma0", "sigma1"}) {
    auto w = named_wall(which);
    auto d4 = DivisorAssignment::d4(), e = DivisorAssignment::e(), dv = DivisorAssignment::d_vor();
    Rational expected = curve_intersection(w, dv) + 4 * curve_intersection(w, e);
    CHECK(curve_intersection(w, d4) == expected);
    auto combo = d4 * Rational(3) + e * Rational(-1, 2);
    expected = 3 * curve_intersection(w, d4) - Rational(1, 2) * curve_intersection(w, e);
    CHECK(curve_intersection(w, combo) == expected);
  }
  CHECK(DivisorAssignment::by_name("DVor")(cone_atlas::atlas().e()) == 0);
  CHECK_THROWS_AS(DivisorAssignment::by_name("K"), InputError);
  CHECK_THROWS_AS(DivisorAssignment::d4()(forms::parse_form("x1^2 + x2^2", 4)), InputError);
}

TEST_CASE("intersection numbers are invariant under G1") {
  for (const std::string which : {"sigma0", "sigma1"}) {
    auto w = named_wall(which);
    Cone facet(which, w.facet);
    for (const auto& m : cone_atlas::group_g1().elements()) {
      std::vector<QuadForm> moved;
      for (const auto& v : facet.generators()) moved.push_back(forms::act(m, v));
      auto w2 = wall_relation(Cone("moved", moved), forms::act(m, w.u), forms::act(m, w.u_prime));
      CHECK(curve_intersection(w2, DivisorAssignment::d4()) == curve_intersection(w, DivisorAssignment::d4()));
      CHECK(curve_intersection(w2, DivisorAssignment::e()) == curve_intersection(w, DivisorAssignment::e()));
    }
  }
}

TEST_CASE("wall_relation rejects non-walls") {
  const auto& a = cone_atlas::atlas();
  // e and the corollary form lie on the same side of sigma0
  CHECK_THROWS_AS(wall_relation(a.cone("sigma0"), a.e(), a.e_prime()), InputError);
  CHECK_THROWS_AS(wall_relation(a.cone("sigma0"), a.e(), a.e()), InputError);
  Cone short_facet("f", 4, {a.form("x1^2"), a.form("x2^2")});
  CHECK_THROWS_AS(wall_relation(short_facet, a.e(), a.form("x3^2")), InputError);
  CHECK_THROWS_AS(wall_relation(a.cone("sigma0"), a.e(), forms::parse_form("x1^2", 3)), InputError);
}
