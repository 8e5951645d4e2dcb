#include "nefcone/wall_calculus.hpp"

#include <algorithm>

#include "nefcone/cone_atlas.hpp"
#include "nefcone/form_text.hpp"

namespace nefcone::walls {

Integer WallRelation::coefficient(const QuadForm& ray) const {
  QuadForm r = ray.primitive();
  Integer c = 0;
  if (u.primitive() == r) c += alpha;
  if (u_prime.primitive() == r) c += alpha_prime;
  for (std::size_t i = 0; i < facet.size(); ++i)
    if (facet[i].primitive() == r) c += a[i];
  return c;
}

std::vector<QuadForm> WallRelation::rays() const {
  std::vector<QuadForm> out{u, u_prime};
  out.insert(out.end(), facet.begin(), facet.end());
  return out;
}

WallRelation wall_relation(const Cone& facet, const QuadForm& u, const QuadForm& u_prime) {
  int d = facet.ambient_rank();
  if (u.dim() != facet.dim() || u_prime.dim() != facet.dim()) throw InputError("wall_relation: dimension mismatch");
  if (static_cast<int>(facet.size()) != d - 1) throw InputError("wall_relation: the facet needs exactly " + std::to_string(d - 1) + " generators");
  std::vector<QuadForm> cols{u, u_prime};
  for (const auto& v : facet.generators()) cols.push_back(v);
  RatMatrix m = zeros(d, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < d; ++i) m[i][j] = cols[j].coords()[i];
  IntMatrix ker = integer_kernel(m, cols.size());
  if (ker.size() != 1)
    throw InputError("wall_relation: relation space has dimension " + std::to_string(ker.size()) + ", not 1");
  IntVector rel = ker.front();
  if (rel[0] < 0)
    for (auto& x : rel) x = -x;
  if (rel[0] == 0 || rel[1] <= 0) throw InputError("wall_relation: u and u' do not lie on opposite sides of the facet");

  auto det_with = [&](const QuadForm& w) {
    RatMatrix b;
    b.push_back(w.coords());
    for (const auto& v : facet.generators()) b.push_back(v.coords());
    return determinant(b);
  };
  Rational d1 = det_with(u), d2 = det_with(u_prime);
  if (abs(d1) != 1 || abs(d2) != 1) throw InputError("wall_relation: adjacent cones are not basic");

  WallRelation w;
  w.facet = facet.generators();
  w.name = facet.name();
  w.u = u;
  w.u_prime = u_prime;
  w.alpha = rel[0];
  w.alpha_prime = rel[1];
  w.a.assign(rel.begin() + 2, rel.end());
  Rational tr = Rational(w.alpha) * forms::half_trace_prime(u) + Rational(w.alpha_prime) * forms::half_trace_prime(u_prime);
  if (facet.dim() == 4) {
    for (std::size_t i = 0; i < w.a.size(); ++i) tr += Rational(w.a[i]) * forms::half_trace_prime(w.facet[i]);
    if (tr != 0) throw ComputationError("wall_relation: half trace does not annihilate the relation");
  }
  return w;
}

WallRelation named_wall(const std::string& which) {
  const auto& a = cone_atlas::atlas();
  if (which == "sigma0") return wall_relation(a.cone("sigma0"), a.e(), a.form("eta'"));
  if (which == "sigma1") return wall_relation(a.cone("sigma1"), a.e(), a.form("(x1-x2)^2"));
  throw InputError("unknown wall '" + which + "' (expected sigma0 or sigma1)");
}

namespace {

int ray_rank(const QuadForm& ray) {
  auto pr = forms::psd_rank(ray);
  if (!pr.is_psd) throw InputError("ray " + forms::format_form(ray) + " is not positive semidefinite");
  if (pr.rank != 1 && pr.rank != ray.dim())
    throw InputError("divisor multiplicity undefined on the ray " + forms::format_form(ray));
  return pr.rank;
}

}  // namespace

DivisorAssignment DivisorAssignment::d4() {
  return {"D4", [](const QuadForm& r) { return Rational(ray_rank(r) == 1 ? 1 : 4); }};
}

DivisorAssignment DivisorAssignment::e() {
  return {"E", [](const QuadForm& r) { return Rational(ray_rank(r) == 1 ? 0 : 1); }};
}

DivisorAssignment DivisorAssignment::d_vor() {
  return {"DVor", [](const QuadForm& r) { return Rational(ray_rank(r) == 1 ? 1 : 0); }};
}

DivisorAssignment DivisorAssignment::by_name(const std::string& name) {
  if (name == "D4") return d4();
  if (name == "E") return e();
  if (name == "DVor") return d_vor();
  throw InputError("unknown divisor '" + name + "' (expected D4, E or DVor)");
}

DivisorAssignment DivisorAssignment::operator+(const DivisorAssignment& o) const {
  Rule f = rule_, g = o.rule_;
  return {name_ + "+" + o.name_, [f, g](const QuadForm& r) -> Rational { return f(r) + g(r); }};
}

DivisorAssignment DivisorAssignment::operator*(const Rational& s) const {
  Rule f = rule_;
  return {to_string(s) + "*" + name_, [f, s](const QuadForm& r) -> Rational { return s * f(r); }};
}

Rational curve_intersection(const WallRelation& rel, const DivisorAssignment& d) {
  // Basic adjacent cones: the relation is normalised with alpha = alpha' = 1.
  Rational v = Rational(rel.alpha) * d(rel.u) + Rational(rel.alpha_prime) * d(rel.u_prime);
  for (std::size_t i = 0; i < rel.facet.size(); ++i) v += Rational(rel.a[i]) * d(rel.facet[i]);
  return v;
}

Rational depth4_pairing(const Rational& a, const Rational& b, const Rational& c, const std::string& which) {
  (void)a;
  WallRelation w = named_wall(which);
  return -b * curve_intersection(w, DivisorAssignment::d4()) - c * curve_intersection(w, DivisorAssignment::e());
}

PrincipalRelation principal_relation(const std::function<Rational(const QuadForm&)>& psi,
                                     const std::vector<QuadForm>& rays) {
  PrincipalRelation p;
  for (const auto& r : rays) {
    p.rays.push_back(r.primitive());
    p.coefficients.push_back(psi(r));
  }
  return p;
}

Rational pair(const PrincipalRelation& p, const WallRelation& w) {
  Rational v = 0;
  for (const auto& r : w.rays()) {
    auto it = std::find(p.rays.begin(), p.rays.end(), r.primitive());
    if (it == p.rays.end()) continue;
    v += Rational(w.coefficient(r)) * p.coefficients[it - p.rays.begin()];
  }
  return v;
}

}  // namespace nefcone::walls
