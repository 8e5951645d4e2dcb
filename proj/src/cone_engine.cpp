#include "nefcone/cone_engine.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "nefcone/exact_lp.hpp"
#include "nefcone/form_text.hpp"

namespace nefcone::cones {

namespace {

RatMatrix columns_of(const Cone& cone) {
  // D x m matrix whose columns are the generators.
  RatMatrix a = zeros(cone.ambient_rank(), cone.size());
  for (std::size_t j = 0; j < cone.size(); ++j)
    for (int i = 0; i < cone.ambient_rank(); ++i) a[i][j] = cone[j].coords()[i];
  return a;
}

void check_subset(const Cone& cone, const std::vector<int>& subset) {
  for (int i : subset)
    if (i < 0 || i >= static_cast<int>(cone.size()))
      throw InputError("generator index " + std::to_string(i) + " out of range for cone '" + cone.name() + "'");
}

RatVector primitive_rational(const RatVector& v) { return to_rational(primitive_direction(v)); }

// Double description for {y : a_k . y >= 0 for all k}.
struct ConeDD {
  std::vector<RatVector> lineality;
  std::vector<RatVector> rays;
};

ConeDD double_description(const std::vector<RatVector>& constraints, std::size_t d) {
  ConeDD out;
  for (std::size_t i = 0; i < d; ++i) {
    RatVector u(d, Rational(0));
    u[i] = 1;
    out.lineality.push_back(u);
  }
  std::vector<RatVector> done;
  for (const auto& a : constraints) {
    std::size_t pick = out.lineality.size();
    for (std::size_t i = 0; i < out.lineality.size(); ++i)
      if (dot(a, out.lineality[i]) != 0) {
        pick = i;
        break;
      }
    if (pick < out.lineality.size()) {
      RatVector l0 = out.lineality[pick];
      Rational s0 = dot(a, l0);
      if (s0 < 0) {
        for (auto& x : l0) x = -x;
        s0 = -s0;
      }
      std::vector<RatVector> lin;
      for (std::size_t i = 0; i < out.lineality.size(); ++i) {
        if (i == pick) continue;
        RatVector l = out.lineality[i];
        Rational f = dot(a, l) / s0;
        for (std::size_t k = 0; k < d; ++k) l[k] -= f * l0[k];
        lin.push_back(l);
      }
      for (auto& r : out.rays) {
        Rational f = dot(a, r) / s0;
        for (std::size_t k = 0; k < d; ++k) r[k] -= f * l0[k];
      }
      out.rays.push_back(l0);
      out.lineality = std::move(lin);
      done.push_back(a);
      continue;
    }
    std::vector<Rational> val;
    for (const auto& r : out.rays) val.push_back(dot(a, r));
    // zero sets over the constraints processed so far
    std::vector<std::vector<char>> zero(out.rays.size());
    for (std::size_t r = 0; r < out.rays.size(); ++r)
      for (const auto& c : done) zero[r].push_back(dot(c, out.rays[r]) == 0);
    std::vector<RatVector> next;
    for (std::size_t r = 0; r < out.rays.size(); ++r)
      if (val[r] >= 0) next.push_back(out.rays[r]);
    for (std::size_t p = 0; p < out.rays.size(); ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t n = 0; n < out.rays.size(); ++n) {
        if (val[n] >= 0) continue;
        std::vector<char> common(done.size());
        for (std::size_t k = 0; k < done.size(); ++k) common[k] = zero[p][k] && zero[n][k];
        bool adjacent = true;
        for (std::size_t r = 0; r < out.rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          bool contains = true;
          for (std::size_t k = 0; k < done.size(); ++k)
            if (common[k] && !zero[r][k]) {
              contains = false;
              break;
            }
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        RatVector v(d);
        for (std::size_t k = 0; k < d; ++k) v[k] = val[p] * out.rays[n][k] - val[n] * out.rays[p][k];
        next.push_back(primitive_rational(v));
      }
    }
    out.rays = std::move(next);
    done.push_back(a);
  }
  return out;
}

DualVector to_dual(int dim, const RatVector& v) { return DualVector(dim, v); }

}  // namespace

Membership member(const Cone& cone, const QuadForm& q, const RatVector& objective) {
  if (q.dim() != cone.dim()) throw InputError("member: dimension mismatch");
  Membership out;
  if (cone.size() == 0) {
    out.member = q.is_zero();
    if (!out.member) out.separator = DualVector(q.dim(), (-q).coords());
    return out;
  }
  if (!objective.empty() && objective.size() != cone.size()) throw InputError("member: objective length mismatch");
  auto res = lp::solve(columns_of(cone), q.coords(), objective);
  if (res.status == lp::Status::Infeasible) {
    out.separator = DualVector(q.dim(), res.farkas);
    return out;
  }
  if (res.status == lp::Status::Unbounded) throw ComputationError("member: unbounded objective");
  out.member = true;
  out.coefficients = res.x;
  return out;
}

FaceTest is_face(const Cone& cone, const std::vector<int>& subset) {
  check_subset(cone, subset);
  std::set<int> in(subset.begin(), subset.end());
  FaceTest out;
  std::size_t d = cone.ambient_rank();
  std::vector<int> outside;
  for (int j = 0; j < static_cast<int>(cone.size()); ++j)
    if (!in.count(j)) outside.push_back(j);
  if (outside.empty()) {
    out.is_face = true;
    out.support = DualVector(cone.dim(), RatVector(d, Rational(0)));
    return out;
  }
  // variables y+ (d), y- (d), slack per outside generator
  std::size_t nvar = 2 * d + outside.size();
  RatMatrix a;
  RatVector b;
  for (int i : in) {
    RatVector row(nvar, Rational(0));
    for (std::size_t k = 0; k < d; ++k) {
      row[k] = cone[i].coords()[k];
      row[d + k] = -cone[i].coords()[k];
    }
    a.push_back(row);
    b.push_back(0);
  }
  for (std::size_t s = 0; s < outside.size(); ++s) {
    RatVector row(nvar, Rational(0));
    for (std::size_t k = 0; k < d; ++k) {
      row[k] = cone[outside[s]].coords()[k];
      row[d + k] = -cone[outside[s]].coords()[k];
    }
    row[2 * d + s] = -1;
    a.push_back(row);
    b.push_back(1);
  }
  auto res = lp::solve(a, b);
  if (res.status != lp::Status::Optimal) return out;
  RatVector y(d);
  for (std::size_t k = 0; k < d; ++k) y[k] = res.x[k] - res.x[d + k];
  out.is_face = true;
  out.support = DualVector(cone.dim(), y);
  return out;
}

int span_rank(const Cone& cone, const std::vector<int>& subset) {
  check_subset(cone, subset);
  RatMatrix m;
  for (int i : subset) m.push_back(cone[i].coords());
  return m.empty() ? 0 : rank(m);
}

bool DualDescription::in_lineality(const DualVector& v) const { return reduce(v).is_zero(); }

DualVector DualDescription::reduce(const DualVector& v) const {
  RatVector r = v.coords();
  for (const auto& l : lineality) {
    const auto& c = l.coords();
    std::size_t p = 0;
    while (p < c.size() && c[p] == 0) ++p;
    if (p == c.size() || r[p] == 0) continue;
    Rational f = r[p] / c[p];
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= f * c[k];
  }
  return DualVector(dim, r);
}

bool DualDescription::is_ray(const DualVector& v) const {
  DualVector r = reduce(v);
  if (r.is_zero()) return false;
  DualVector p(dim, primitive_rational(r.coords()));
  for (const auto& ray : rays)
    if (ray == p) {
      // same direction: compare a nonzero coordinate's sign
      for (std::size_t k = 0; k < p.coords().size(); ++k)
        if (p.coords()[k] != 0) return (r.coords()[k] > 0) == (p.coords()[k] > 0);
    }
  return false;
}

DualDescription dual_description(const Cone& cone) {
  DualDescription dd;
  dd.cone = cone.name();
  dd.dim = cone.dim();
  std::size_t d = cone.ambient_rank();
  std::vector<RatVector> cons;
  for (const auto& g : cone.generators()) cons.push_back(g.coords());
  ConeDD raw = double_description(cons, d);

  if (!raw.lineality.empty()) {
    RowEchelon e = rref(raw.lineality);
    for (std::size_t i = 0; i < e.pivots.size(); ++i)
      dd.lineality.push_back(to_dual(dd.dim, primitive_rational(e.reduced[i])));
  }
  std::set<DualVector> rays;
  for (const auto& r : raw.rays) {
    DualVector red = dd.reduce(to_dual(dd.dim, r));
    if (red.is_zero()) continue;
    rays.insert(to_dual(dd.dim, primitive_rational(red.coords())));
  }
  dd.rays.assign(rays.begin(), rays.end());
  for (const auto& ray : dd.rays)
    for (const auto& g : cone.generators())
      if (ray.pair(g) < 0) throw ComputationError("dual description: ray pairs negatively with a generator");
  for (const auto& l : dd.lineality)
    for (const auto& g : cone.generators())
      if (l.pair(g) != 0) throw ComputationError("dual description: lineality vector does not vanish on the cone");
  return dd;
}

void attach_lattice_basis(DualDescription& dd, const std::vector<DualVector>& basis,
                          const std::vector<std::string>& names) {
  std::size_t d = forms::coord_count(dd.dim);
  if (basis.size() != d || names.size() != d) throw InputError("lattice basis must have one vector per coordinate");
  RatMatrix m;
  for (const auto& b : basis) {
    if (b.dim() != dd.dim) throw InputError("lattice basis dimension mismatch");
    m.push_back(b.coords());
  }
  Rational det = determinant(m);
  if (det != 1 && det != -1) throw InputError("lattice basis is not unimodular (det " + to_string(det) + ")");
  std::size_t nr = dd.rays.size();
  if (nr + dd.lineality.size() != d) throw InputError("lattice basis needs a simplicial dual cone");
  for (std::size_t i = 0; i < d; ++i) {
    bool ok = i < nr ? dd.is_ray(basis[i]) : dd.in_lineality(basis[i]);
    if (!ok)
      throw InputError("lattice basis vector " + names[i] + (i < nr ? " is not a ray" : " is not in the lineality space"));
  }
  dd.lattice_basis = basis;
  dd.basis_names = names;
}

std::vector<long> monomial_exponents(const DualDescription& dd, const DualVector& target) {
  if (dd.lattice_basis.empty()) throw InputError("dual description has no lattice basis");
  RatMatrix bt = transpose([&] {
    RatMatrix m;
    for (const auto& b : dd.lattice_basis) m.push_back(b.coords());
    return m;
  }());
  auto x = solve(bt, target.coords());
  if (!x) throw ComputationError("target is not in the span of the lattice basis");
  std::vector<long> out;
  for (const auto& v : *x) {
    if (!is_integer(v)) throw ComputationError("non-integral exponent " + to_string(v));
    out.push_back(v.get_num().get_si());
  }
  return out;
}

std::vector<std::vector<int>> facets(const Cone& cone) {
  DualDescription dd = dual_description(cone);
  int full = cone.size() ? span_rank(cone, [&] {
    std::vector<int> all(cone.size());
    std::iota(all.begin(), all.end(), 0);
    return all;
  }()) : 0;
  std::set<std::vector<int>> out;
  for (const auto& r : dd.rays) {
    std::vector<int> z;
    for (int j = 0; j < static_cast<int>(cone.size()); ++j)
      if (r.pair(cone[j]) == 0) z.push_back(j);
    if (span_rank(cone, z) == full - 1) out.insert(z);
  }
  return {out.begin(), out.end()};
}

std::vector<std::vector<int>> faces_of_rank(const Cone& cone, int r) {
  std::vector<int> all(cone.size());
  std::iota(all.begin(), all.end(), 0);
  auto fs = facets(cone);
  std::set<std::vector<int>> seen{all};
  std::vector<std::vector<int>> work{all};
  while (!work.empty()) {
    auto f = work.back();
    work.pop_back();
    for (const auto& ft : fs) {
      std::vector<int> meet;
      std::set_intersection(f.begin(), f.end(), ft.begin(), ft.end(), std::back_inserter(meet));
      if (seen.insert(meet).second) work.push_back(meet);
    }
  }
  std::vector<std::vector<int>> out;
  for (const auto& f : seen)
    if (span_rank(cone, f) == r) out.push_back(f);
  return out;
}

ProjectionReport project_and_check(const Cone& cone, int axis, const std::vector<Cone>& targets) {
  if (cone.dim() < 2) throw InputError("project_and_check needs dimension >= 2");
  ProjectionReport rep;
  rep.cone = cone.name();
  rep.axis = axis;
  std::vector<QuadForm> gens;
  for (const auto& g : cone.generators()) {
    QuadForm p = forms::project(g, axis);
    if (p.is_zero()) continue;
    p = p.primitive();
    if (std::find(gens.begin(), gens.end(), p) == gens.end()) gens.push_back(p);
  }
  rep.image = Cone(cone.name() + "|pr" + std::to_string(axis), cone.dim() - 1, gens);
  {
    RatMatrix m;
    for (const auto& g : gens) m.push_back(g.coords());
    rep.image_rank = m.empty() ? 0 : rank(m);
  }
  for (const auto& t : targets) {
    if (t.dim() != cone.dim() - 1) throw InputError("target '" + t.name() + "' has the wrong dimension");
    TargetCheck c{t.name(), true, true};
    for (const auto& g : gens)
      if (!member(t, g).member) {
        c.image_in_target = false;
        break;
      }
    for (const auto& g : t.generators())
      if (!member(rep.image, g).member) {
        c.target_in_image = false;
        break;
      }
    rep.checks.push_back(c);
    if (!rep.container && c.image_in_target) {
      rep.container = t.name();
      rep.equal = c.target_in_image;
    }
  }
  return rep;
}

DicingResult is_dicing(const std::vector<LinearForm>& fs) {
  if (fs.empty()) throw InputError("is_dicing: no forms");
  int g = fs.front().dim();
  RatMatrix m;
  for (const auto& l : fs) {
    if (l.dim() != g) throw InputError("is_dicing: mixed dimensions");
    RatVector row;
    for (long c : l.coeffs()) row.push_back(c);
    m.push_back(row);
  }
  if (rank(m) != g) throw InputError("is_dicing: forms do not span the dual space");
  DicingResult out;
  std::vector<int> idx(g);
  std::iota(idx.begin(), idx.end(), 0);
  int n = static_cast<int>(fs.size());
  while (true) {
    RatMatrix sub;
    for (int i : idx) sub.push_back(m[i]);
    Rational det = determinant(sub);
    if (det != 0 && det != 1 && det != -1) {
      out.dicing = false;
      out.witness = idx;
      out.determinant = det.get_num().get_si();
      return out;
    }
    int k = g - 1;
    while (k >= 0 && idx[k] == n - g + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < g; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

namespace {

long det_small(const std::vector<std::vector<long>>& b) {
  if (b.size() == 1) return b[0][0];
  if (b.size() == 2) return b[0][0] * b[1][1] - b[0][1] * b[1][0];
  return b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
         b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
}

std::vector<std::vector<LinearForm>> build_fragment(int g) {
  std::vector<std::vector<long>> box;
  std::vector<long> v(g, -2);
  while (true) {
    if (std::any_of(v.begin(), v.end(), [](long x) { return x != 0; })) box.push_back(v);
    int k = g - 1;
    while (k >= 0 && v[k] == 2) v[k--] = -2;
    if (k < 0) break;
    ++v[k];
  }
  auto in_box = [](const std::vector<long>& x) {
    return std::all_of(x.begin(), x.end(), [](long c) { return c >= -2 && c <= 2; });
  };
  std::set<std::vector<LinearForm>> cones;
  std::vector<std::size_t> idx(g, 0);
  while (true) {
    std::vector<std::vector<long>> b;
    for (auto i : idx) b.push_back(box[i]);
    long det = det_small(b);
    if (det == 1 || det == -1) {
      std::vector<LinearForm> rays;
      bool ok = true;
      for (int i = 0; i < g && ok; ++i) {
        rays.push_back(LinearForm(b[i]).sign_normalized());
        for (int j = i + 1; j < g; ++j) {
          std::vector<long> d(g);
          for (int k = 0; k < g; ++k) d[k] = b[i][k] - b[j][k];
          if (!in_box(d)) {
            ok = false;
            break;
          }
          rays.push_back(LinearForm(d).sign_normalized());
        }
      }
      if (ok) {
        std::sort(rays.begin(), rays.end());
        cones.insert(rays);
      }
    }
    int k = g - 1;
    while (k >= 0 && idx[k] == box.size() - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return {cones.begin(), cones.end()};
}

const std::vector<std::vector<LinearForm>>& fragment(int g) {
  static std::once_flag flags[4];
  static std::vector<std::vector<LinearForm>> data[4];
  if (g < 1 || g > 3) throw InputError("support fragments exist for dimensions 1..3");
  std::call_once(flags[g], [g] { data[g] = build_fragment(g); });
  return data[g];
}

}  // namespace

SupportFunction SupportFunction::voronoi_fragment(int g, RayValue value, std::string name) {
  SupportFunction s;
  s.dim_ = g;
  s.name_ = std::move(name);
  s.cones_ = &fragment(g);
  s.value_ = std::move(value);
  return s;
}

SupportFunction SupportFunction::unit(int g) {
  return voronoi_fragment(g, [](const LinearForm&) { return Rational(1); }, "psi" + std::to_string(g));
}

SupportCertificate support_certificate(const SupportFunction& psi, const QuadForm& q, std::size_t start) {
  if (q.dim() != psi.dim()) throw InputError("support_eval: dimension mismatch");
  const auto& cs = psi.cones();
  for (std::size_t t = 0; t < cs.size(); ++t) {
    const auto& rays = cs[(start + t) % cs.size()];
    std::vector<QuadForm> squares;
    for (const auto& l : rays) squares.push_back(forms::square(l));
    RatMatrix a = zeros(q.coords().size(), squares.size());
    for (std::size_t j = 0; j < squares.size(); ++j)
      for (std::size_t i = 0; i < q.coords().size(); ++i) a[i][j] = squares[j].coords()[i];
    auto x = solve(a, q.coords());
    if (!x) continue;
    if (std::any_of(x->begin(), x->end(), [](const Rational& c) { return c < 0; })) continue;
    SupportCertificate cert;
    cert.rays = rays;
    cert.coefficients = *x;
    cert.value = 0;
    for (std::size_t j = 0; j < rays.size(); ++j)
      if ((*x)[j] != 0) cert.value += (*x)[j] * psi.ray_value(rays[j]);
    return cert;
  }
  throw InputError("form " + forms::format_coords(q) + " lies outside the stored fragment of " + psi.name());
}

Rational support_eval(const SupportFunction& psi, const QuadForm& q) { return support_certificate(psi, q).value; }

IntMatrix lll_reduce(IntMatrix b) {
  std::size_t n = b.size();
  if (n < 2) return b;
  auto gram_schmidt = [&](std::vector<RatVector>& bs, RatMatrix& mu) {
    bs.assign(n, {});
    mu = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      bs[i] = to_rational(b[i]);
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(to_rational(b[i]), bs[j]) / dot(bs[j], bs[j]);
        for (std::size_t k = 0; k < bs[i].size(); ++k) bs[i][k] -= mu[i][j] * bs[j][k];
      }
    }
  };
  std::vector<RatVector> bs;
  RatMatrix mu;
  gram_schmidt(bs, mu);
  std::size_t k = 1;
  const Rational delta(3, 4);
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      Rational r = floor_q(mu[k][j] + Rational(1, 2));
      if (r != 0) {
        Integer ri = r.get_num();
        for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= ri * b[j][c];
        gram_schmidt(bs, mu);
      }
    }
    if (dot(bs[k], bs[k]) >= (delta - mu[k][k - 1] * mu[k][k - 1]) * dot(bs[k - 1], bs[k - 1])) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt(bs, mu);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

namespace {

LinearForm restrict_linear(const LinearForm& l, const IntMatrix& basis) {
  std::vector<long> c;
  for (const auto& b : basis) {
    long s = 0;
    for (int i = 0; i < l.dim(); ++i) s += l[i] * b[i].get_si();
    c.push_back(s);
  }
  return LinearForm(c);
}

IntMatrix kernel_of(const LinearForm& l) {
  RatMatrix row{RatVector{}};
  for (long c : l.coeffs()) row[0].push_back(c);
  return lll_reduce(integer_kernel(row, l.dim()));
}

}  // namespace

GammaDelta gamma_delta(const Cone& sigma, std::pair<int, int> xi) {
  if (sigma.dim() != 4) throw InputError("gamma_delta: face must live in dimension 4");
  int mu = static_cast<int>(sigma.size());
  if (xi.first < 1 || xi.first > mu || xi.second < 1 || xi.second > mu || xi.first == xi.second)
    throw InputError("gamma_delta: xi must be two distinct positions in 1.." + std::to_string(mu));
  std::vector<LinearForm> roots;
  RatMatrix span;
  for (const auto& g : sigma.generators()) {
    auto l = forms::rank_one_root(g);
    if (!l) throw InputError("gamma_delta: generator " + forms::format_form(g) + " is not a square");
    roots.push_back(*l);
    RatVector row;
    for (long c : l->coeffs()) row.push_back(c);
    span.push_back(row);
  }
  if (rank(span) != 3) throw InputError("gamma_delta: the linear forms of the face must span dimension 3");

  QuadForm e(4, {2, 2, 2, 2, 1, -1, -1, -1, -1, 0});
  GammaDelta out;
  IntMatrix b1 = kernel_of(roots[xi.first - 1]);
  for (const auto& l : roots) {
    LinearForm r = restrict_linear(l, b1);
    if (r.is_zero()) continue;
    r = r.primitive().sign_normalized();
    if (std::find(out.k.begin(), out.k.end(), r) == out.k.end()) out.k.push_back(r);
  }
  std::sort(out.k.begin(), out.k.end());
  out.k_size = static_cast<int>(out.k.size());
  QuadForm ebar = forms::restrict_to(e, b1);
  auto kset = out.k;
  auto psi_gamma = SupportFunction::voronoi_fragment(
      3, [kset](const LinearForm& l) { return Rational(std::count(kset.begin(), kset.end(), l) ? 0 : 1); }, "psi_gamma");
  out.gamma = support_eval(psi_gamma, ebar);

  LinearForm kbar = restrict_linear(roots[xi.second - 1], b1);
  if (kbar.is_zero()) throw InputError("gamma_delta: xi(2) restricts to zero");
  kbar = kbar.primitive().sign_normalized();
  IntMatrix b2 = kernel_of(kbar);
  std::vector<LinearForm> images;
  for (const auto& k : out.k) {
    if (k == kbar) continue;
    LinearForm r = restrict_linear(k, b2);
    if (r.is_zero()) continue;
    r = r.primitive().sign_normalized();
    if (std::find(images.begin(), images.end(), r) == images.end()) images.push_back(r);
  }
  if (images.size() != 1)
    throw ComputationError("gamma_delta: second restriction gives " + std::to_string(images.size()) +
                           " forms, expected exactly one");
  out.m = images.front();
  QuadForm ebarbar = forms::restrict_to(ebar, b2);
  LinearForm m = out.m;
  auto psi_delta = SupportFunction::voronoi_fragment(
      2, [m](const LinearForm& l) { return Rational(l == m ? 0 : 1); }, "psi_delta");
  out.delta = support_eval(psi_delta, ebarbar);
  return out;
}

}  // namespace nefcone::cones
