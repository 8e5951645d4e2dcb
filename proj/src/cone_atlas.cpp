#include "nefcone/cone_atlas.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "nefcone/form_text.hpp"

namespace nefcone::embedded {
extern const std::string_view atlas_text;
}

namespace nefcone::cone_atlas {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

int dim_for_length(std::size_t n) {
  for (int g = 1; g <= forms::kMaxDim; ++g)
    if (static_cast<std::size_t>(forms::coord_count(g)) == n) return g;
  throw InputError("coordinate vector of length " + std::to_string(n) + " matches no dimension");
}

RatVector parse_row(const std::string& text) {
  std::string s = text;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw InputError("expected [..] in '" + text + "'");
  s = s.substr(1, s.size() - 2);
  RatVector out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  return out;
}

RatMatrix parse_matrix(const std::string& text) {
  if (text.size() < 4 || text.substr(0, 2) != "[[" || text.substr(text.size() - 2) != "]]")
    throw InputError("expected [[..],..] in '" + text + "'");
  RatMatrix m;
  std::size_t pos = 1;
  while (pos < text.size() - 1) {
    std::size_t open = text.find('[', pos);
    if (open == std::string::npos) break;
    std::size_t close = text.find(']', open);
    m.push_back(parse_row(text.substr(open, close - open + 1)));
    pos = close + 1;
  }
  return m;
}

}  // namespace

const QuadForm& Atlas::form(const std::string& name) const {
  auto it = forms_.find(name);
  if (it == forms_.end()) throw InputError("atlas has no form '" + name + "'");
  return it->second;
}

const Cone& Atlas::cone(const std::string& name) const {
  auto it = cones_.find(name);
  if (it == cones_.end()) throw InputError("atlas has no cone '" + name + "'");
  return it->second;
}

const RatMatrix& Atlas::ymap(const std::string& name) const {
  auto it = ymaps_.find(name);
  if (it == ymaps_.end()) throw InputError("atlas has no map '" + name + "'");
  return it->second;
}

const DualBasis& Atlas::dual_basis(const std::string& cone) const {
  auto it = dual_bases_.find(cone);
  if (it == dual_bases_.end()) throw InputError("atlas has no dual basis for '" + cone + "'");
  return it->second;
}

std::vector<std::string> Atlas::form_names() const { return form_order_; }
std::vector<std::string> Atlas::cone_names() const { return cone_order_; }

Atlas parse_atlas(std::string_view text) {
  Atlas a;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool versioned = false;
  DualBasis* open_basis = nullptr;
  auto fail = [&](const std::string& msg) { throw InputError("atlas line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (open_basis) {
      if (tok[0] == "end") {
        open_basis = nullptr;
        continue;
      }
      if (tok.size() != 2) fail("expected '<name> [coords]' inside dualbasis");
      RatVector v = parse_row(tok[1]);
      open_basis->names.push_back(tok[0]);
      open_basis->vectors.emplace_back(dim_for_length(v.size()), v);
      continue;
    }
    const std::string& kw = tok[0];
    if (kw == "format") {
      if (tok.size() != 3 || tok[1] != "nefcone-atlas" || tok[2] != "1") fail("unsupported atlas format");
      versioned = true;
    } else if (!versioned) {
      fail("missing format line");
    } else if (kw == "form") {
      if (tok.size() != 3) fail("expected 'form <name> [coords]'");
      RatVector v = parse_row(tok[2]);
      if (a.forms_.count(tok[1])) fail("duplicate form " + tok[1]);
      a.forms_.emplace(tok[1], QuadForm(dim_for_length(v.size()), v));
      a.form_order_.push_back(tok[1]);
    } else if (kw == "cone") {
      if (tok.size() < 3) fail("expected 'cone <name> <forms..>'");
      std::vector<QuadForm> gens;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        auto it = a.forms_.find(tok[i]);
        if (it == a.forms_.end()) fail("unknown form " + tok[i]);
        gens.push_back(it->second);
      }
      a.cones_.emplace(tok[1], Cone(tok[1], gens));
      a.cone_order_.push_back(tok[1]);
    } else if (kw == "ymap") {
      if (tok.size() != 3) fail("expected 'ymap <name> [[..]]'");
      a.ymaps_[tok[1]] = parse_matrix(tok[2]);
    } else if (kw == "dualbasis") {
      if (tok.size() != 2) fail("expected 'dualbasis <cone>'");
      open_basis = &a.dual_bases_[tok[1]];
      open_basis->cone = tok[1];
    } else {
      fail("unknown keyword " + kw);
    }
  }
  if (open_basis) throw InputError("atlas: unterminated dualbasis block");
  return a;
}

const Atlas& atlas() {
  static const Atlas a = parse_atlas(embedded::atlas_text);
  return a;
}

MatrixGroup::MatrixGroup(std::vector<LatticeMap> generators, std::vector<LatticeMap> elements)
    : gens_(std::move(generators)), elems_(std::move(elements)) {
  std::sort(elems_.begin(), elems_.end());
}

bool MatrixGroup::contains(const LatticeMap& m) const { return std::binary_search(elems_.begin(), elems_.end(), m); }

MatrixGroup generate_group(const std::vector<LatticeMap>& gens, std::size_t cap) {
  if (gens.empty()) throw InputError("generate_group needs at least one generator");
  int g = gens.front().dim();
  for (const auto& m : gens) {
    if (m.dim() != g) throw InputError("generate_group: mixed dimensions");
    if (m.determinant() != 1 && m.determinant() != -1) throw InputError("generate_group: generator is not unimodular");
  }
  std::set<LatticeMap> seen{LatticeMap::identity(g)};
  std::deque<LatticeMap> queue{LatticeMap::identity(g)};
  while (!queue.empty()) {
    LatticeMap x = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      LatticeMap y = x * s;
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw ComputationError("group closure exceeds cap " + std::to_string(cap));
        queue.push_back(y);
      }
    }
  }
  return MatrixGroup(gens, {seen.begin(), seen.end()});
}

namespace {

RatMatrix ymul(const RatMatrix& a, const RatMatrix& b) { return multiply(a, b); }

}  // namespace

LatticeMap x_map(const std::string& name) {
  const Atlas& a = atlas();
  if (name == "w'") {
    // s14 after s23 after w; with rows as images the matrix of f o g is G F.
    return forms::y_to_x(ymul(ymul(a.ymap("w"), a.ymap("s23")), a.ymap("s14")));
  }
  if (name == "k1k2") return forms::y_to_x(ymul(a.ymap("k1"), a.ymap("k2")));
  return forms::y_to_x(a.ymap(name));
}

const MatrixGroup& group_g() {
  static const MatrixGroup grp = [] {
    std::vector<LatticeMap> gens;
    for (const char* n : {"k1", "k2", "k3", "k4", "s12", "s13", "s14", "s23", "s24", "s34", "w"}) gens.push_back(x_map(n));
    return generate_group(gens);
  }();
  return grp;
}

const MatrixGroup& group_g1() {
  static const MatrixGroup grp = [] {
    std::vector<LatticeMap> gens;
    for (const char* n : {"k3", "k4", "k1k2", "s12", "s34", "w'"}) gens.push_back(x_map(n));
    return generate_group(gens);
  }();
  return grp;
}

OrbitStabilizer orbit_and_stabilizer(const MatrixGroup& grp, const QuadForm& ray) {
  if (ray.is_zero()) throw InputError("orbit of the zero form");
  QuadForm r = ray.primitive();
  std::set<QuadForm> orbit;
  std::vector<LatticeMap> stab;
  for (const auto& m : grp.elements()) {
    QuadForm img = forms::act(m, r).primitive();
    orbit.insert(img);
    if (img == r) stab.push_back(m);
  }
  return {{orbit.begin(), orbit.end()}, MatrixGroup({}, stab)};
}

std::vector<int> generator_permutation(const LatticeMap& m, const Cone& cone) {
  std::vector<int> perm;
  for (std::size_t i = 0; i < cone.size(); ++i) {
    int j = cone.index_of(forms::act(m, cone[i]));
    if (j < 0) throw ComputationError("group element does not permute the generators of '" + cone.name() + "'");
    perm.push_back(j);
  }
  return perm;
}

std::vector<int> apply_permutation(const std::vector<int>& perm, const std::vector<int>& indices) {
  std::vector<int> out;
  for (int i : indices) out.push_back(perm.at(i));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Permutations of the generators of a cone for every element of a group, cached
// for the two built-in groups acting on the second perfect cone.
std::vector<std::vector<int>> permutations(const MatrixGroup& grp, const Cone& cone) {
  std::vector<std::vector<int>> out;
  out.reserve(grp.order());
  for (const auto& m : grp.elements()) out.push_back(generator_permutation(m, cone));
  return out;
}

const std::vector<std::vector<int>>& cached_permutations(const MatrixGroup& grp, const Cone& cone) {
  static std::mutex mu;
  static std::map<std::pair<const MatrixGroup*, std::string>, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(&grp, cone.name());
  bool builtin = (&grp == &group_g() || &grp == &group_g1()) && cone.name() == "pi2_4" &&
                 cone.generators() == atlas().pi2_4().generators();
  if (builtin) {
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache[key] = permutations(grp, cone);
  }
  static thread_local std::vector<std::vector<int>> scratch;
  scratch = permutations(grp, cone);
  return scratch;
}

}  // namespace

std::vector<FaceOrbit> face_orbits(const MatrixGroup& grp, const Cone& cone, const std::vector<FaceLabel>& faces) {
  const auto& perms = cached_permutations(grp, cone);
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (faces[i].parent != cone.name()) throw InputError("face_orbits: face of a different cone");
    index[faces[i].indices] = static_cast<int>(i);
  }
  std::vector<char> done(faces.size(), 0);
  std::vector<FaceOrbit> out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (done[i]) continue;
    std::set<std::vector<int>> orbit;
    for (const auto& p : perms) orbit.insert(apply_permutation(p, faces[i].indices));
    FaceOrbit fo;
    for (const auto& o : orbit) {
      auto it = index.find(o);
      if (it == index.end()) throw InputError("face_orbits: face list is not closed under the group");
      done[it->second] = 1;
      fo.members.push_back(faces[it->second]);
    }
    fo.representative = fo.members.front();
    out.push_back(fo);
  }
  std::sort(out.begin(), out.end(),
            [](const FaceOrbit& a, const FaceOrbit& b) { return a.representative.indices < b.representative.indices; });
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::string tag = "O" + std::to_string(k + 1);
    out[k].representative.orbit_tag = tag;
    for (auto& m : out[k].members) m.orbit_tag = tag;
  }
  return out;
}

FaceLabel label(const Cone& parent, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) throw InputError("repeated generator index");
  for (int i : indices)
    if (i < 0 || i >= static_cast<int>(parent.size())) throw InputError("generator index out of range");
  return {parent.name(), indices, ""};
}

FaceLabel pi2_face(const std::vector<QuadForm>& gens) {
  const Cone& p = atlas().pi2_4();
  std::vector<int> idx;
  for (const auto& g : gens) {
    int i = p.index_of(g);
    if (i < 0) throw InputError(forms::format_form(g) + " is not a generator of the second perfect cone");
    idx.push_back(i);
  }
  return label(p, idx);
}

std::vector<FaceLabel> face_labels(const Cone& cone, int rank) {
  std::vector<FaceLabel> out;
  for (const auto& f : cones::faces_of_rank(cone, rank)) {
    if (!cones::is_face(cone, f).is_face) throw ComputationError("face enumeration produced a non-face");
    out.push_back({cone.name(), f, ""});
  }
  return out;
}

void BicolouredGraph::add(int a, int b, Colour c) {
  if (a > b) std::swap(a, b);
  if (a < 1 || b > 4 || a == b) throw InputError("graph edges join two distinct vertices in 1..4");
  Edge e{a, b, c};
  if (std::find(edges_.begin(), edges_.end(), e) != edges_.end())
    throw InputError("graph already has this edge with this colour");
  edges_.push_back(e);
  std::sort(edges_.begin(), edges_.end());
}

bool BicolouredGraph::has(int a, int b, Colour c) const {
  if (a > b) std::swap(a, b);
  return std::find(edges_.begin(), edges_.end(), Edge{a, b, c}) != edges_.end();
}

namespace {

std::set<std::pair<int, int>> pairs_of(const std::vector<Edge>& es) {
  std::set<std::pair<int, int>> s;
  for (const auto& e : es) s.insert({e.a, e.b});
  return s;
}

std::set<int> vertices_of(const std::vector<Edge>& es) {
  std::set<int> v;
  for (const auto& e : es) {
    v.insert(e.a);
    v.insert(e.b);
  }
  return v;
}

}  // namespace

bool BicolouredGraph::triangular() const {
  return edges_.size() == 3 && pairs_of(edges_).size() == 3 && vertices_of(edges_).size() == 3;
}

bool BicolouredGraph::forked() const {
  if (edges_.size() != 3 || pairs_of(edges_).size() != 3 || vertices_of(edges_).size() != 4) return false;
  for (int v = 1; v <= 4; ++v)
    if (std::all_of(edges_.begin(), edges_.end(), [v](const Edge& e) { return e.a == v || e.b == v; })) return true;
  return false;
}

bool BicolouredGraph::connected() const {
  auto vs = vertices_of(edges_);
  if (vs.empty()) return true;
  std::set<int> reached{*vs.begin()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : edges_)
      if (reached.count(e.a) != reached.count(e.b)) {
        reached.insert(e.a);
        reached.insert(e.b);
        grew = true;
      }
  }
  return reached.size() == vs.size();
}

int BicolouredGraph::red_count() const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.colour == Colour::Red; }));
}

std::string BicolouredGraph::to_string() const {
  std::vector<std::string> parts;
  for (const auto& e : edges_)
    parts.push_back(std::string(e.colour == Colour::Black ? "b" : "r") + std::to_string(e.a) + std::to_string(e.b));
  return "{" + join(parts, ",") + "}";
}

namespace {

const std::vector<Edge>& edge_table() {
  static const std::vector<Edge> table = [] {
    std::vector<Edge> t;
    for (const auto& g : atlas().pi2_4().generators()) {
      auto l = forms::rank_one_root(forms::act(forms::psi(), g));
      if (!l) throw ComputationError("generator image is not a square");
      bool found = false;
      for (int i = 0; i < 4 && !found; ++i)
        for (int j = i + 1; j < 4 && !found; ++j)
          for (int s : {1, -1}) {
            std::vector<long> c(4, 0);
            c[i] = 1;
            c[j] = s;
            if (forms::LinearForm(c) == *l) {
              t.push_back({i + 1, j + 1, s == 1 ? Colour::Black : Colour::Red});
              found = true;
              break;
            }
          }
      if (!found) throw ComputationError("generator is not of the form (x_i +- x_j)^2 after the Voronoi map");
    }
    return t;
  }();
  return table;
}

void require_pi2(const FaceLabel& f) {
  if (f.parent != "pi2_4") throw InputError("face must belong to pi2_4");
  for (int i : f.indices)
    if (i < 0 || i >= 12) throw InputError("generator index out of range");
}

}  // namespace

Edge generator_edge(int index) { return edge_table().at(index); }

int generator_of_edge(const Edge& e) {
  const auto& t = edge_table();
  auto it = std::find(t.begin(), t.end(), e);
  if (it == t.end()) throw InputError("no generator for this edge");
  return static_cast<int>(it - t.begin());
}

BicolouredGraph face_graph(const FaceLabel& face, GraphMode mode) {
  require_pi2(face);
  BicolouredGraph g;
  for (int i = 0; i < 12; ++i) {
    bool in = std::binary_search(face.indices.begin(), face.indices.end(), i);
    if (in == (mode == GraphMode::Nonvanishing)) {
      Edge e = generator_edge(i);
      g.add(e.a, e.b, e.colour);
    }
  }
  return g;
}

FacetType facet_type(const FaceLabel& facet) {
  require_pi2(facet);
  if (facet.indices.size() != 9) throw InputError("facet_type expects a facet with nine generators");
  BicolouredGraph g = face_graph(facet, GraphMode::Vanishing);
  return g.triangular() && g.red_count() % 2 == 1 ? FacetType::RT : FacetType::BF;
}

std::string to_string(FacetType t) { return t == FacetType::RT ? "RT" : "BF"; }

Dim3Type classify_dim3(const FaceLabel& face) {
  require_pi2(face);
  if (face.indices.size() != 3) throw InputError("classify_dim3 expects three generators");
  BicolouredGraph g = face_graph(face, GraphMode::Nonvanishing);
  if (g.triangular() && g.red_count() % 2 == 1) return Dim3Type::RTstar;
  if (g.triangular() || g.forked()) return Dim3Type::BFstar;
  return g.connected() ? Dim3Type::String : Dim3Type::Disconnected;
}

std::string to_string(Dim3Type t) {
  switch (t) {
    case Dim3Type::String: return "string";
    case Dim3Type::BFstar: return "BF*";
    case Dim3Type::RTstar: return "RT*";
    case Dim3Type::Disconnected: return "disconnected";
  }
  return "?";
}

const std::vector<FaceLabel>& pi2_facets() {
  static const std::vector<FaceLabel> facets = [] {
    auto fs = face_labels(atlas().pi2_4(), 9);
    for (auto& f : fs) f.orbit_tag = to_string(facet_type(f));
    return fs;
  }();
  return facets;
}

AdjoiningFacets facets_adjoining(const QuadForm& ray) {
  int idx = atlas().pi2_4().index_of(ray);
  if (idx < 0) throw InputError(forms::format_form(ray) + " is not a generator of the second perfect cone");
  AdjoiningFacets out;
  for (const auto& f : pi2_facets()) {
    if (!std::binary_search(f.indices.begin(), f.indices.end(), idx)) continue;
    out.facets.push_back(f);
    (facet_type(f) == FacetType::RT ? out.rt : out.bf)++;
  }
  return out;
}

bool is_vor3_maximal(const Cone& image) {
  if (image.dim() != 3) return false;
  // extreme rays: generators that are not in the cone of the others
  std::vector<forms::LinearForm> roots;
  for (std::size_t i = 0; i < image.size(); ++i) {
    std::vector<QuadForm> rest;
    for (std::size_t j = 0; j < image.size(); ++j)
      if (j != i) rest.push_back(image[j]);
    if (!rest.empty() && cones::member(Cone("rest", 3, rest), image[i]).member) continue;
    auto l = forms::rank_one_root(image[i]);
    if (!l) return false;
    roots.push_back(*l);
  }
  std::sort(roots.begin(), roots.end());
  const auto& cs = cones::SupportFunction::unit(3).cones();
  return std::find(cs.begin(), cs.end(), roots) != cs.end();
}

G1Class g1_class(const FaceLabel& facet) {
  require_pi2(facet);
  if (!std::binary_search(facet.indices.begin(), facet.indices.end(), 0))
    throw InputError("g1_class expects a facet containing x1^2");
  if (facet_type(facet) == FacetType::RT) return G1Class::Pi2_1;
  const Atlas& a = atlas();
  Cone c = a.pi2_4().subcone("facet", facet.indices).with("facet+e", a.e());
  auto rep = cones::project_and_check(c, 1, {});
  return is_vor3_maximal(rep.image) ? G1Class::Pi2_2 : G1Class::Pi2_3;
}

std::string to_string(G1Class c) {
  switch (c) {
    case G1Class::Pi2_1: return "Pi2_1";
    case G1Class::Pi2_2: return "Pi2_2";
    case G1Class::Pi2_3: return "Pi2_3";
  }
  return "?";
}

FaceLabel mu6_representative() {
  const Atlas& a = atlas();
  return pi2_face({a.form("x1^2"), a.form("x3^2"), a.form("x4^2"), a.form("(x1-x3)^2"), a.form("(x1-x4)^2"),
                   a.form("(x3-x4)^2")});
}

namespace {

// Permutation carrying the face onto the representative, or empty.
std::vector<int> carrier(const FaceLabel& face, const FaceLabel& rep) {
  const auto& perms = cached_permutations(group_g(), atlas().pi2_4());
  for (const auto& p : perms)
    if (apply_permutation(p, face.indices) == rep.indices) return p;
  return {};
}

bool opposite_at_rep(int a, int b) {
  Edge x = generator_edge(a), y = generator_edge(b);
  int shared = (x.a == y.a || x.a == y.b) + (x.b == y.a || x.b == y.b);
  return shared % 2 == 0 && x.colour != y.colour;
}

}  // namespace

bool is_opposite(const FaceLabel& face, int a, int b) {
  require_pi2(face);
  if (face.indices.size() != 6) throw InputError("face is not of the six-generator type");
  if (!std::binary_search(face.indices.begin(), face.indices.end(), a) ||
      !std::binary_search(face.indices.begin(), face.indices.end(), b) || a == b)
    throw InputError("pair is not a pair of generators of the face");
  auto p = carrier(face, mu6_representative());
  if (p.empty()) throw InputError("face is not G-equivalent to the six-generator representative");
  return opposite_at_rep(p[a], p[b]);
}

PairSplit opposite_pairs(const FaceLabel& face) {
  require_pi2(face);
  if (face.indices.size() != 6) throw InputError("face is not of the six-generator type");
  auto p = carrier(face, mu6_representative());
  if (p.empty()) throw InputError("face is not G-equivalent to the six-generator representative");
  PairSplit out;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) {
      int a = face.indices[i], b = face.indices[j];
      (opposite_at_rep(p[a], p[b]) ? out.opposite : out.non_opposite).push_back({a, b});
    }
  return out;
}

std::string orbit_csv(const std::vector<FaceOrbit>& orbits, int dimension) {
  auto fmt = [](const std::vector<int>& idx) {
    std::vector<std::string> s;
    for (int i : idx) s.push_back(std::to_string(i + 1));
    return join(s, " ");
  };
  std::ostringstream out;
  out << "indices,dimension,orbit,representative\n";
  for (const auto& o : orbits)
    for (const auto& m : o.members)
      out << fmt(m.indices) << "," << dimension << "," << m.orbit_tag << "," << fmt(o.representative.indices) << "\n";
  return out.str();
}

}  // namespace nefcone::cone_atlas
