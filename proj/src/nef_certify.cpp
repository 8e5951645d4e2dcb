#include "nefcone/nef_certify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "nefcone/cone_atlas.hpp"
#include "nefcone/cone_engine.hpp"
#include "nefcone/form_text.hpp"

namespace nefcone::nef {

std::string to_string(Basis b) {
  switch (b) {
    case Basis::IGU: return "igu";
    case Basis::VOR_D4: return "vor-d4";
    case Basis::VOR: return "vor";
  }
  return "?";
}

Basis parse_basis(const std::string& text) {
  if (text == "igu" || text == "igusa") return Basis::IGU;
  if (text == "vor-d4" || text == "vor_d4") return Basis::VOR_D4;
  if (text == "vor" || text == "voronoi") return Basis::VOR;
  throw InputError("unknown basis '" + text + "' (expected igu, vor-d4 or vor)");
}

DivisorClass make_class(Basis basis, Rational a, Rational b, Rational c, int level) {
  if (level < 1) throw InputError("level must be a positive integer");
  if (basis == Basis::IGU && c != 0) throw InputError("the IGU basis has no E coefficient");
  return {basis, std::move(a), std::move(b), std::move(c), level};
}

std::vector<std::string> NefVerdict::active() const {
  std::vector<std::string> out;
  for (const auto& c : constraints)
    if (c.active()) out.push_back(c.text);
  return out;
}

std::vector<std::string> NefVerdict::violated() const {
  std::vector<std::string> out;
  for (const auto& c : constraints)
    if (!c.satisfied()) out.push_back(c.text);
  return out;
}

namespace {

std::vector<Constraint> constraints_of(const DivisorClass& d) {
  if (d.level < 1) throw InputError("level must be a positive integer");
  Rational n(d.level);
  switch (d.basis) {
    case Basis::IGU:
      if (d.c != 0) throw InputError("the IGU basis has no E coefficient");
      return {{"b >= 0", d.b}, {"a - 12b/n >= 0", d.a - 12 * d.b / n}};
    case Basis::VOR_D4:
      return {{"a - 12b/n >= 0", d.a - 12 * d.b / n}, {"b - 2c >= 0", d.b - 2 * d.c}, {"c >= 0", d.c}};
    case Basis::VOR:
      return {{"b >= 0", d.b},
              {"a - 12b/n >= 0", d.a - 12 * d.b / n},
              {"c - 4b >= 0", d.c - 4 * d.b},
              {"4b - 8c/9 >= 0", 4 * d.b - Rational(8, 9) * d.c}};
  }
  return {};
}

}  // namespace

NefVerdict is_nef(const DivisorClass& d) {
  NefVerdict v;
  v.constraints = constraints_of(d);
  v.nef = std::all_of(v.constraints.begin(), v.constraints.end(), [](const Constraint& c) { return c.satisfied(); });
  return v;
}

bool is_ample_interior(const DivisorClass& d) {
  if (d.basis != Basis::IGU) throw InputError("ampleness is only certified in the IGU basis");
  auto cs = constraints_of(d);
  return std::all_of(cs.begin(), cs.end(), [](const Constraint& c) { return c.slack > 0; });
}

DivisorClass convert_basis(const DivisorClass& d, Basis target) {
  if (d.basis == target) return d;
  if (d.basis == Basis::IGU || target == Basis::IGU)
    throw InputError("no conversion between " + to_string(d.basis) + " and " + to_string(target));
  DivisorClass out = d;
  out.basis = target;
  if (target == Basis::VOR)
    out.c = 4 * d.b + d.c;
  else
    out.c = d.c - 4 * d.b;
  return out;
}

DivisorClass canonical_class(Basis basis, int level) {
  switch (basis) {
    case Basis::IGU: return make_class(basis, 5, 1, 0, level);
    case Basis::VOR_D4: return make_class(basis, 5, 1, -3, level);
    case Basis::VOR: return make_class(basis, 5, 1, 1, level);
  }
  throw InputError("unknown basis");
}

Rational default_epsilon() { return Rational(1, 100); }

std::string DepthBound::form() const {
  if (b_coefficient == 1) return "b - c";
  return nefcone::to_string(b_coefficient) + "*b - c";
}

DepthBound depth_bound(int mu, const std::vector<DepthCase>& cases) {
  if (mu < 3 || mu > 6) throw InputError("boundary multiplicity must be in 3..6");
  long total = 0;
  for (const auto& c : cases) {
    if (c.count < 1) throw InputError("case counts must be positive");
    if (c.k_size != 2 && c.k_size != 3) throw InputError("#K must be 2 or 3");
    if (mu == 3 && c.k_size != 2) throw InputError("#K is 2 when mu = 3");
    if (mu == 6 && c.k_size != 3) throw InputError("#K is 3 when mu = 6");
    if (c.gamma < 0 || c.delta < 0) throw InputError("gamma and delta are nonnegative");
    total += c.count;
  }
  Integer fm = factorial(mu), fm1 = factorial(mu - 1);
  if (Integer(total) != fm)
    throw InputError("case counts sum to " + std::to_string(total) + ", expected " + fm.get_str());
  Rational beta1 = Rational(1) / (Rational(mu - 1) * fm);
  Rational beta2 = Rational(1) / (Rational(mu - 1) * fm1);
  DepthBound out;
  out.mu = mu;
  out.b_coefficient = Rational(4, mu - 1);
  for (const auto& c : cases) {
    Rational w = beta2 / (c.k_size - 1);
    out.b_coefficient += c.count * (-beta1 * c.delta - w * c.delta + w * c.gamma);
    if (c.fibre) out.b_coefficient += c.count * (beta1 + w) * c.delta / 6;
  }
  out.b_coefficient.canonicalize();
  if (out.b_coefficient > 0) out.threshold = 1 / out.b_coefficient;
  return out;
}

std::vector<DepthCase> depth_cases(const Cone& sigma, bool lower_gamma, const std::function<bool(int, int)>& fibre) {
  int mu = static_cast<int>(sigma.size());
  if (mu < 3 || mu > 6) throw InputError("depth_cases: the face needs 3..6 generators");
  long weight = factorial(mu - 2).get_si();
  std::vector<DepthCase> out;
  for (int i = 1; i <= mu; ++i) {
    for (int j = 1; j <= mu; ++j) {
      if (i == j) continue;
      auto gd = cones::gamma_delta(sigma, {i, j});
      DepthCase c;
      c.k_size = gd.k_size;
      c.delta = gd.delta;
      c.gamma = lower_gamma ? gd.delta : gd.gamma;
      c.count = weight;
      c.fibre = fibre && fibre(i, j);
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> depth3_case_names() { return {"string", "bf", "mu4", "mu5", "disconnected", "mu6"}; }

NamedDepthBound depth3_bound(const std::string& name) {
  const auto& a = cone_atlas::atlas();
  auto cone_of = [&](const std::vector<std::string>& names) {
    std::vector<forms::QuadForm> g;
    for (const auto& n : names) g.push_back(a.form(n));
    return Cone(name, g);
  };
  auto describe = [](const Cone& c) {
    std::vector<std::string> parts;
    for (const auto& g : c.generators()) parts.push_back(forms::format_form(g));
    return "<" + join(parts, ", ") + ">";
  };
  NamedDepthBound out;
  out.name = name;
  if (name == "string" || name == "bf") {
    Cone s = name == "string" ? cone_of({"x1^2", "x2^2", "x3^2"}) : cone_of({"x1^2", "x3^2", "x4^2"});
    out.face = describe(s);
    out.bound = depth_bound(3, depth_cases(s));
  } else if (name == "disconnected") {
    Cone s = cone_of({"x1^2", "x2^2", "(x3-x4)^2"});
    out.face = describe(s);
    out.bound = depth_bound(3, depth_cases(s, false, [](int, int) { return true; }));
  } else if (name == "mu4" || name == "mu5") {
    Cone s = name == "mu4" ? cone_of({"x1^2", "x3^2", "(x1-x3)^2", "x4^2"})
                           : cone_of({"x1^2", "x3^2", "x4^2", "(x1-x3)^2", "(x1-x4)^2"});
    out.face = describe(s);
    out.bound = depth_bound(static_cast<int>(s.size()), depth_cases(s, true));
  } else if (name == "mu6") {
    FaceLabel rep = cone_atlas::mu6_representative();
    Cone s = a.pi2_4().subcone(name, rep.indices);
    out.face = describe(s);
    auto non_opposite = [rep](int i, int j) { return !cone_atlas::is_opposite(rep, rep.indices[i - 1], rep.indices[j - 1]); };
    out.bound = depth_bound(6, depth_cases(s, true, non_opposite));
  } else {
    throw InputError("unknown depth-3 case '" + name + "'");
  }
  return out;
}

}  // namespace nefcone::nef
