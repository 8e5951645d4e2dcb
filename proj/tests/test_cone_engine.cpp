#include <doctest.h>

#include <map>
#include <set>

#include "nefcone/cone_atlas.hpp"
#include "nefcone/cone_engine.hpp"
#include "nefcone/form_text.hpp"
#include "test_util.hpp"

using namespace nefcone;
using namespace nefcone::cones;
using forms::DualVector;

namespace {

const cone_atlas::Atlas& A() { return cone_atlas::atlas(); }

Cone cone_of(const std::vector<std::string>& names) {
  std::vector<QuadForm> g;
  for (const auto& n : names) g.push_back(A().form(n));
  return Cone("test", g);
}

DualVector U(int i, int j) { return DualVector::unit(4, i - 1, j - 1); }

// Brute-force dicing oracle: every independent g-subset has |det| = 1.
bool dicing_oracle(const std::vector<LinearForm>& ls) {
  int g = ls.front().dim(), n = static_cast<int>(ls.size());
  std::vector<int> pick(g);
  bool ok = true;
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (!ok) return;
    if (depth == g) {
      RatMatrix m;
      for (int i : pick) {
        RatVector row;
        for (long c : ls[i].coeffs()) row.emplace_back(c);
        m.push_back(row);
      }
      Rational d = determinant(m);
      if (d != 0 && abs(d) != 1) ok = false;
      return;
    }
    for (int i = start; i < n; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return ok;
}

}  // namespace

TEST_CASE("membership of e in the second perfect cone") {
  const Cone& p = A().pi2_4();
  auto m = member(p, A().e());
  REQUIRE(m.member);
  // the certificate is some nonnegative combination; the uniform one is 1/3 each
  QuadForm sum(4);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(m.coefficients[i] >= 0);
    sum += p[i] * m.coefficients[i];
  }
  CHECK(sum == A().e());
  QuadForm third(4);
  for (const auto& g : p.generators()) third += g * Rational(1, 3);
  CHECK(third == A().e());
}

TEST_CASE("membership refusal carries a separating functional") {
  const Cone& p = A().pi2_4();
  auto m = member(p, QuadForm::unit(4, 0, 1));
  CHECK_FALSE(m.member);
  CHECK(m.separator.pair(QuadForm::unit(4, 0, 1)) < 0);
  for (const auto& g : p.generators()) CHECK(m.separator.pair(g) >= 0);
  auto ebar = forms::project(A().e(), 1);
  CHECK(member(A().pi1(3), ebar).member);
  CHECK_THROWS_AS(member(p, QuadForm(3)), InputError);
}

TEST_CASE("property: membership agrees with random nonnegative combinations") {
  testutil::Gen gen(99);
  const Cone& p = A().pi1(4);
  for (int trial = 0; trial < 60; ++trial) {
    QuadForm q(4);
    for (const auto& g : p.generators()) q += g * Rational(gen.integer(0, 3));
    if (q.is_zero()) continue;
    CHECK(member(p, q).member);
    // pushing one coordinate outside by a large off-diagonal term breaks psd-ness
    QuadForm bad = q + QuadForm::unit(4, 0, 1) * Rational(50);
    CHECK_FALSE(member(p, bad).member);
  }
}

TEST_CASE("faces") {
  const Cone& p = A().pi2_4();
  int checked = 0;
  for (int a = 0; a < 12; ++a)
    for (int b = a + 1; b < 12; ++b)
      for (int c = b + 1; c < 12; ++c) {
        auto ft = is_face(p, {a, b, c});
        CHECK(ft.is_face);
        for (int i = 0; i < 12; ++i) {
          Rational v = ft.support.pair(p[i]);
          if (i == a || i == b || i == c)
            CHECK(v == 0);
          else
            CHECK(v >= 1);
        }
        ++checked;
      }
  CHECK(checked == 220);
  std::vector<int> all(12);
  for (int i = 0; i < 12; ++i) all[i] = i;
  CHECK(is_face(p, all).is_face);
  CHECK(is_face(A().pi1(4), {0, 1}).is_face);
  CHECK(facets(p).size() == 64);
  for (const auto& f : facets(p)) CHECK(f.size() == 9);
  CHECK(faces_of_rank(A().pi1(3), 1).size() == 6);
}

TEST_CASE("dual of <x1^2, x2^2>") {
  auto dd = dual_description(cone_of({"x1^2", "x2^2"}));
  CHECK(dd.lineality.size() == 8);
  REQUIRE(dd.rays.size() == 2);
  CHECK(dd.is_ray(U(1, 1)));
  CHECK(dd.is_ray(U(2, 2)));
  CHECK(dd.in_lineality(U(3, 3)));
  CHECK(dd.in_lineality(-U(4, 4)));
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) CHECK(dd.in_lineality(U(i, j)));
  CHECK_FALSE(dd.in_lineality(U(1, 1)));
}

TEST_CASE("dual of <x1^2, e> and the monomial table") {
  Cone c = cone_of({"x1^2", "e"});
  auto dd = dual_description(c);
  CHECK(dd.lineality.size() == 8);
  CHECK(dd.rays.size() == 2);
  CHECK(dd.is_ray(U(1, 1) - U(1, 2) * 2));
  CHECK(dd.is_ray(U(1, 2)));
  std::vector<DualVector> pm{U(2, 2) - U(3, 3), U(2, 2) - U(4, 4), U(2, 4) + U(1, 2), U(2, 4) - U(1, 3),
                             U(2, 4) - U(1, 4), U(2, 4) - U(2, 3), U(1, 2) * 2 - U(2, 2), U(3, 4)};
  for (const auto& v : pm) {
    CHECK(dd.in_lineality(v));
    CHECK(dd.in_lineality(-v));
  }
  // every listed dual vector pairs >= 0 with the generators
  for (const auto& r : dd.rays)
    for (const auto& g : c.generators()) CHECK(r.pair(g) >= 0);
  for (const auto& l : dd.lineality)
    for (const auto& g : c.generators()) CHECK(l.pair(g) == 0);

  const auto& basis = A().dual_basis("x1^2+e");
  attach_lattice_basis(dd, basis.vectors, basis.names);
  // t_ij -> exponents of T1..T10
  std::map<std::pair<int, int>, std::vector<long>> table = {
      {{1, 1}, {1, 2, 0, 0, 0, 0, 0, 0, 0, 0}},  {{1, 2}, {0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {{1, 3}, {0, -1, 0, 0, 1, -1, 0, 0, 0, 0}}, {{1, 4}, {0, -1, 0, 0, 1, 0, -1, 0, 0, 0}},
      {{2, 2}, {0, 2, 0, 0, 0, 0, 0, 0, -1, 0}}, {{2, 3}, {0, -1, 0, 0, 1, 0, 0, -1, 0, 0}},
      {{2, 4}, {0, -1, 0, 0, 1, 0, 0, 0, 0, 0}},  {{3, 3}, {0, 2, -1, 0, 0, 0, 0, 0, -1, 0}},
      {{3, 4}, {0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},   {{4, 4}, {0, 2, 0, -1, 0, 0, 0, 0, -1, 0}},
  };
  CHECK(table.size() == 10);
  for (const auto& [ij, expected] : table) CHECK(monomial_exponents(dd, U(ij.first, ij.second)) == expected);
  for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
    std::vector<long> unit(10, 0);
    unit[k] = 1;
    CHECK(monomial_exponents(dd, basis.vectors[k]) == unit);
  }
  CHECK_THROWS_AS(monomial_exponents(dd, U(1, 1) * Rational(1, 2)), ComputationError);
}

TEST_CASE("duality round trip on atlas cones") {
  for (const auto& name : A().cone_names()) {
    const Cone& c = A().cone(name);
    auto dd = dual_description(c);
    for (const auto& g : c.generators()) {
      for (const auto& r : dd.rays) CHECK(r.pair(g) >= 0);
      for (const auto& l : dd.lineality) CHECK(l.pair(g) == 0);
    }
    // a generator of the cone is not separated by any dual ray; a negated one is
    if (c.size() > 0 && !dd.rays.empty()) {
      bool separated = false;
      for (const auto& r : dd.rays) separated = separated || r.pair(-c[0]) < 0;
      CHECK(separated);
    }
  }
  auto whole = dual_description(Cone("zero", 4, {}));
  CHECK(whole.lineality.size() == 10);
  CHECK(whole.rays.empty());
}

TEST_CASE("project_and_check") {
  const auto& a = A();
  std::vector<Cone> targets{a.pi1(3)};
  auto r = project_and_check(a.pi1(4), 1, targets);
  CHECK(r.container == "pi1_3");
  CHECK(r.equal);
  for (int i = 1; i <= 2; ++i) {
    r = project_and_check(a.pi2(i), 1, targets);
    CHECK(r.container == "pi1_3");
    CHECK(r.equal);
    CHECK(r.image_rank == 6);
  }
  r = project_and_check(a.pi2(3), 1, targets);
  CHECK(r.container == "pi1_3");
  CHECK_FALSE(r.equal);
  CHECK(r.checks.front().image_in_target);
  CHECK_FALSE(r.checks.front().target_in_image);
  CHECK(project_and_check(a.pi1(3), 1, {a.pi1(2)}).equal);
}

TEST_CASE("dicing") {
  CHECK(is_dicing({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}, {0, 1, -1}}).dicing);
  auto bad = is_dicing({{1, 1}, {1, -1}});
  CHECK_FALSE(bad.dicing);
  CHECK(bad.determinant == -2);
  CHECK(bad.witness == std::vector<int>{0, 1});
  CHECK(is_dicing({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}).dicing);
  CHECK_THROWS_AS(is_dicing({{1, 0, 0}, {0, 1, 0}}), InputError);
  for (int g = 2; g <= 4; ++g) {
    std::vector<LinearForm> ls;
    for (const auto& q : A().pi1(g).generators()) ls.push_back(*forms::rank_one_root(q));
    CHECK(is_dicing(ls).dicing);
  }
  std::vector<LinearForm> pi2;
  for (const auto& q : A().pi2_4().generators()) pi2.push_back(*forms::rank_one_root(q));
  CHECK_FALSE(is_dicing(pi2).dicing);
}

TEST_CASE("property: is_dicing agrees with the subset oracle") {
  testutil::Gen gen(4242);
  int yes = 0, no = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int g = static_cast<int>(gen.integer(2, 3));
    int n = static_cast<int>(gen.integer(g, g + 3));
    std::vector<LinearForm> ls;
    for (int i = 0; i < g; ++i) {
      std::vector<long> e(g, 0);
      e[i] = 1;
      ls.emplace_back(e);
    }
    while (static_cast<int>(ls.size()) < n) {
      std::vector<long> c;
      for (int i = 0; i < g; ++i) c.push_back(gen.integer(-2, 2));
      LinearForm l(c);
      if (!l.is_zero()) ls.push_back(l);
    }
    bool oracle = dicing_oracle(ls);
    CHECK(is_dicing(ls).dicing == oracle);
    (oracle ? yes : no)++;
  }
  CHECK(yes > 20);
  CHECK(no > 20);
}

TEST_CASE("support functions") {
  auto psi3 = SupportFunction::unit(3);
  auto psi2 = SupportFunction::unit(2);
  auto ebar = forms::project(A().e(), 1);
  CHECK(support_eval(psi3, ebar) == 4);
  // second projection from the original x2, which is the first variable of ebar
  CHECK(forms::project(ebar, 1) == QuadForm(2, {2, 2, 0}));
  CHECK(support_eval(psi2, forms::project(ebar, 1)) == 4);
  CHECK(support_eval(psi2, forms::project(ebar, 2)) == 3);
  auto ebar_prime = forms::project(A().e_prime(), 1);
  CHECK(ebar_prime == forms::parse_form("(x1-x2)^2 + (x2-x3)^2 + x1^2 + x3^2", 3));
  CHECK(support_eval(psi2, forms::parse_form("x1^2 + x2^2 + (x1-x2)^2", 2)) == 3);
  CHECK_THROWS_AS(support_eval(psi2, forms::parse_form("x1^2 - x2^2", 2)), InputError);
}

TEST_CASE("property: support_eval does not depend on the certificate") {
  auto psi3 = SupportFunction::unit(3);
  testutil::Gen gen(5);
  const auto& cones3 = psi3.cones();
  for (int trial = 0; trial < 15; ++trial) {
    const auto& c = cones3[gen.integer(0, static_cast<long>(cones3.size()) - 1)];
    QuadForm q(3);
    for (const auto& l : c) q += forms::square(l) * Rational(gen.integer(0, 3));
    if (q.is_zero()) continue;
    std::set<std::string> values;
    std::size_t n = psi3.cone_count();
    for (std::size_t start : {std::size_t{0}, n / 3, 2 * n / 3, n - 1})
      values.insert(to_string(support_certificate(psi3, q, start).value));
    CHECK(values.size() == 1);
  }
}

TEST_CASE("gamma and delta on the representatives") {
  Cone string = cone_of({"x1^2", "x2^2", "x3^2"});
  for (auto xi : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 1}, {2, 3}}) {
    auto gd = gamma_delta(string, xi);
    CHECK(gd.gamma == 3);
    CHECK(gd.delta == 2);
  }
  for (auto xi : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}}) {
    auto gd = gamma_delta(string, xi);
    CHECK(gd.gamma == 2);
    CHECK(gd.delta == 2);
  }
  Cone bf = cone_of({"x1^2", "x3^2", "x4^2"});
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) {
        auto gd = gamma_delta(bf, {i, j});
        CHECK(gd.gamma == 2);
        CHECK(gd.delta == 2);
      }
  auto gd = gamma_delta(cone_of({"x1^2", "x2^2", "(x3-x4)^2"}), {1, 2});
  CHECK(gd.gamma == 4);
  CHECK(gd.delta == 4);
  Cone mu5 = cone_of({"x1^2", "x2^2", "x3^2", "(x1-x2)^2", "(x1-x3)^2"});
  CHECK(gamma_delta(mu5, {1, 2}).k_size == 2);
  CHECK(gamma_delta(mu5, {2, 1}).k_size == 3);
  CHECK_THROWS_AS(gamma_delta(mu5, {1, 1}), InputError);
  CHECK_THROWS_AS(gamma_delta(cone_of({"x1^2", "x2^2"}), {1, 2}), InputError);
}

TEST_CASE("gamma >= delta = 2 over every admissible face") {
  const Cone& p = A().pi2_4();
  auto linear_rank = [&](const std::vector<int>& idx) {
    RatMatrix m;
    for (int i : idx) {
      auto root = forms::rank_one_root(p[i]);
      RatVector row;
      for (long c : root->coeffs()) row.emplace_back(c);
      m.push_back(row);
    }
    return rank(m);
  };
  std::set<std::vector<int>> disconnected;
  for (const auto& f : cone_atlas::face_labels(p, 3))
    if (cone_atlas::classify_dim3(f) == cone_atlas::Dim3Type::Disconnected) disconnected.insert(f.indices);
  std::map<int, int> faces_by_mu;
  long pairs = 0;
  for (int d = 3; d <= 6; ++d) {
    for (const auto& f : cone_atlas::face_labels(p, d)) {
      if (linear_rank(f.indices) != 3) continue;
      bool has_disconnected = false;
      int mu = static_cast<int>(f.indices.size());
      for (int a = 0; a < mu; ++a)
        for (int b = a + 1; b < mu; ++b)
          for (int c = b + 1; c < mu; ++c)
            if (disconnected.count({f.indices[a], f.indices[b], f.indices[c]})) has_disconnected = true;
      if (has_disconnected) continue;
      faces_by_mu[mu]++;
      Cone sigma = p.subcone("sigma", f.indices);
      for (int i = 1; i <= mu; ++i)
        for (int j = 1; j <= mu; ++j) {
          if (i == j) continue;
          auto gd = gamma_delta(sigma, {i, j});
          CHECK(gd.delta == 2);
          CHECK(gd.gamma >= gd.delta);
          ++pairs;
        }
    }
  }
  CHECK(faces_by_mu[3] > 0);
  CHECK(faces_by_mu[6] > 0);
  CHECK(pairs > 0);
}

TEST_CASE("lll_reduce keeps the lattice") {
  IntMatrix b{{1, 1, 1}, {-1, 0, 2}, {3, 5, 6}};
  auto r = lll_reduce(b);
  RatMatrix rb, rr;
  for (const auto& row : b) rb.push_back(to_rational(row));
  for (const auto& row : r) rr.push_back(to_rational(row));
  CHECK(abs(determinant(rb)) == abs(determinant(rr)));
  auto inv = inverse(rb);
  REQUIRE(inv);
  auto t = multiply(rr, *inv);
  for (const auto& row : t)
    for (const auto& x : row) CHECK(is_integer(x));
}
