#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nefcone/cone.hpp"

namespace nefcone::walls {

using forms::QuadForm;

// alpha*u + alpha_prime*u' + sum a_i v_i = 0, primitive, alpha > 0.
struct WallRelation {
  std::string name;
  std::vector<QuadForm> facet;
  QuadForm u, u_prime;
  Integer alpha, alpha_prime;
  std::vector<Integer> a;

  // Coefficient of a ray in the relation, 0 when the ray does not occur.
  Integer coefficient(const QuadForm& ray) const;
  std::vector<QuadForm> rays() const;  // u, u', v_1..v_9
};

WallRelation wall_relation(const Cone& facet, const QuadForm& u, const QuadForm& u_prime);

// The walls through the two atlas facets: (sigma0; e, eta') and (sigma1; e, (x1-x2)^2).
WallRelation named_wall(const std::string& which);

// Multiplicity of a divisor on each ray of the fan.
class DivisorAssignment {
 public:
  using Rule = std::function<Rational(const QuadForm&)>;
  DivisorAssignment(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  // D4: 1 on squares and 4 on rank-4 rays; E: rank-4 rays only; DVor: squares only.
  static DivisorAssignment d4();
  static DivisorAssignment e();
  static DivisorAssignment d_vor();
  static DivisorAssignment by_name(const std::string& name);

  const std::string& name() const { return name_; }
  Rational operator()(const QuadForm& ray) const { return rule_(ray.primitive()); }

  DivisorAssignment operator+(const DivisorAssignment& o) const;
  DivisorAssignment operator*(const Rational& s) const;

 private:
  std::string name_;
  Rule rule_;
};

Rational curve_intersection(const WallRelation& rel, const DivisorAssignment& d);

// (aL - bD4 - cE).C for the curve of the named wall; L.C = 0.
Rational depth4_pairing(const Rational& a, const Rational& b, const Rational& c, const std::string& which);

struct PrincipalRelation {
  std::vector<QuadForm> rays;
  std::vector<Rational> coefficients;
};

// Sum over the rays of psi(v) D_v.
PrincipalRelation principal_relation(const std::function<Rational(const QuadForm&)>& psi,
                                     const std::vector<QuadForm>& rays);
Rational pair(const PrincipalRelation& p, const WallRelation& w);

}  // namespace nefcone::walls
