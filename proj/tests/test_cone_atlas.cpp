#include <doctest.h>

#include <map>
#include <set>

#include "nefcone/cone_atlas.hpp"
#include "nefcone/form_text.hpp"

using namespace nefcone;
using namespace nefcone::cone_atlas;

namespace {

const Cone& pi2() { return atlas().pi2_4(); }

FaceLabel face_of(const std::vector<std::string>& names) {
  std::vector<forms::QuadForm> g;
  for (const auto& n : names) g.push_back(atlas().form(n));
  return pi2_face(g);
}

FaceLabel facet_without(const std::vector<std::string>& names) {
  std::set<int> drop;
  for (const auto& n : names) drop.insert(pi2().index_of(atlas().form(n)));
  std::vector<int> keep;
  for (int i = 0; i < 12; ++i)
    if (!drop.count(i)) keep.push_back(i);
  return label(pi2(), keep);
}

FaceLabel facet_without_edges(const std::vector<Edge>& edges) {
  std::vector<int> keep;
  std::set<int> drop;
  for (const auto& e : edges) drop.insert(generator_of_edge(e));
  for (int i = 0; i < 12; ++i)
    if (!drop.count(i)) keep.push_back(i);
  return label(pi2(), keep);
}

// Rank of the span of the linear forms of the chosen generators.
int root_rank(const FaceLabel& f, const std::vector<int>& idx) {
  RatMatrix m;
  for (int i : idx) {
    auto l = forms::rank_one_root(pi2()[i]);
    REQUIRE(l);
    RatVector row;
    for (long x : l->coeffs()) row.emplace_back(x);
    m.push_back(row);
  }
  (void)f;
  return rank(m);
}

}  // namespace

TEST_CASE("atlas parsing") {
  const auto& a = atlas();
  CHECK(a.pi2_4().size() == 12);
  CHECK(a.pi1(4).size() == 10);
  CHECK(a.pi1(3).dim() == 3);
  CHECK(a.e() == forms::parse_form("2x1^2+2x2^2+2x3^2+2x4^2+2x1*x2-2x1*x3-2x1*x4-2x2*x3-2x2*x4", 4));
  // e is the sum of the generators of the second perfect cone divided by 3
  forms::QuadForm sum(4);
  for (const auto& g : a.pi2_4().generators()) sum += g;
  CHECK(sum == a.e() * 3);
  CHECK_THROWS_AS(a.form("nope"), InputError);
  CHECK_THROWS_AS(a.cone("nope"), InputError);
  CHECK_THROWS_AS(parse_atlas("form x [1]\n"), InputError);
  CHECK_THROWS_AS(parse_atlas("format nefcone-atlas 1\ncone c missing\n"), InputError);
  CHECK_THROWS_AS(parse_atlas("format nefcone-atlas 1\nform x [1,2]\n"), InputError);
}

TEST_CASE("group orders and the orbit of x1^2") {
  CHECK(group_g().order() == 1152);
  CHECK(group_g1().order() == 96);
  auto os = orbit_and_stabilizer(group_g(), atlas().form("x1^2"));
  CHECK(os.orbit.size() == 12);
  CHECK(os.stabilizer.order() == 96);
  // G1 fixes x1^2
  for (const auto& m : group_g1().elements()) CHECK(forms::act(m, atlas().form("x1^2")) == atlas().form("x1^2"));
  // every element permutes the generators and fixes e
  for (const auto& m : group_g().elements()) {
    CHECK(forms::act(m, atlas().e()) == atlas().e());
    auto perm = generator_permutation(m, pi2());
    CHECK(std::set<int>(perm.begin(), perm.end()).size() == 12);
  }
  CHECK(orbit_and_stabilizer(group_g(), atlas().e()).orbit.size() == 1);
}

TEST_CASE("group closure detects non-closing generators") {
  forms::LatticeMap shear({{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK_THROWS_AS(generate_group({shear}, 50), ComputationError);
  auto two = generate_group({x_map("k1")});
  CHECK(two.order() == 2);
  CHECK(two.contains(forms::LatticeMap::identity(4)));
}

TEST_CASE("the substituted maps send the beta and rho labels as expected") {
  auto w = x_map("w'");
  CHECK(group_g1().contains(w));
  // w' fixes x1^2 and carries beta14 to beta23
  CHECK(forms::act(w, atlas().form("x1^2")) == atlas().form("x1^2"));
  int b14 = generator_of_edge({1, 4, Colour::Black});
  int b23 = generator_of_edge({2, 3, Colour::Black});
  auto perm = generator_permutation(w, pi2());
  CHECK(perm[b14] == b23);
}

TEST_CASE("edge labels are a bijection") {
  std::set<std::pair<std::pair<int, int>, int>> seen;
  for (int i = 0; i < 12; ++i) {
    Edge e = generator_edge(i);
    CHECK(e.a < e.b);
    CHECK(generator_of_edge(e) == i);
    seen.insert({{e.a, e.b}, static_cast<int>(e.colour)});
  }
  CHECK(seen.size() == 12);
  CHECK(generator_edge(pi2().index_of(atlas().form("x1^2"))) == Edge{1, 2, Colour::Black});
  CHECK(generator_edge(pi2().index_of(atlas().form("x2^2"))) == Edge{1, 2, Colour::Red});
}

TEST_CASE("facet census") {
  const auto& fs = pi2_facets();
  REQUIRE(fs.size() == 64);
  auto orbits = face_orbits(group_g(), pi2(), fs);
  REQUIRE(orbits.size() == 2);
  std::map<std::string, std::size_t> sizes;
  for (const auto& o : orbits) {
    std::set<FacetType> types;
    for (const auto& m : o.members) types.insert(facet_type(m));
    CHECK(types.size() == 1);
    sizes[to_string(*types.begin())] = o.members.size();
  }
  CHECK(sizes["RT"] == 16);
  CHECK(sizes["BF"] == 48);
  // the three dropped generators of an RT facet span a plane
  for (const auto& f : fs) {
    std::vector<int> dropped;
    for (int i = 0; i < 12; ++i)
      if (!std::binary_search(f.indices.begin(), f.indices.end(), i)) dropped.push_back(i);
    CHECK((root_rank(f, dropped) == 2) == (facet_type(f) == FacetType::RT));
  }
}

TEST_CASE("named facets") {
  CHECK(facet_type(facet_without_edges({{1, 2, Colour::Red}, {2, 3, Colour::Red}, {1, 3, Colour::Red}})) == FacetType::RT);
  CHECK(facet_type(facet_without_edges({{1, 2, Colour::Black}, {1, 3, Colour::Black}, {1, 4, Colour::Black}})) ==
        FacetType::BF);
  CHECK(facet_type(facet_without({"x1^2", "x3^2", "x4^2"})) == FacetType::BF);
  // sigma0 drops beta13, beta14 and rho34
  auto s0 = pi2_face(atlas().cone("sigma0").generators());
  CHECK(facet_type(s0) == FacetType::RT);
  auto s1 = pi2_face(atlas().cone("sigma1").generators());
  CHECK(facet_type(s1) == FacetType::BF);
  CHECK_THROWS_AS(facet_type(face_of({"x1^2", "x2^2"})), InputError);
}

TEST_CASE("facets adjoining x1^2 and their G1 classes") {
  auto adj = facets_adjoining(atlas().form("x1^2"));
  CHECK(adj.facets.size() == 48);
  CHECK(adj.rt == 12);
  CHECK(adj.bf == 36);
  std::map<G1Class, int> counts;
  for (const auto& f : adj.facets) counts[g1_class(f)]++;
  CHECK(counts[G1Class::Pi2_1] == 12);
  CHECK(counts[G1Class::Pi2_2] + counts[G1Class::Pi2_3] == 36);
  CHECK(counts[G1Class::Pi2_2] > 0);
  CHECK(counts[G1Class::Pi2_3] > 0);
  // the class is constant on G1-orbits
  for (const auto& o : face_orbits(group_g1(), pi2(), adj.facets)) {
    std::set<G1Class> cls;
    for (const auto& m : o.members) cls.insert(g1_class(m));
    CHECK(cls.size() == 1);
  }
  // atlas representatives
  for (int i = 1; i <= 3; ++i) {
    auto gens = atlas().pi2(i).generators();
    gens.pop_back();  // drop e
    CHECK(g1_class(pi2_face(gens)) == static_cast<G1Class>(i - 1));
  }
}

TEST_CASE("faces of dimension 2 and 3") {
  auto f2 = face_labels(pi2(), 2);
  auto o2 = face_orbits(group_g(), pi2(), f2);
  REQUIRE(o2.size() == 2);
  auto in_orbit = [](const std::vector<FaceOrbit>& os, const FaceLabel& f) {
    for (std::size_t i = 0; i < os.size(); ++i)
      for (const auto& m : os[i].members)
        if (m == f) return static_cast<int>(i);
    return -1;
  };
  int a = in_orbit(o2, face_of({"x1^2", "x2^2"})), b = in_orbit(o2, face_of({"x1^2", "x3^2"}));
  CHECK(a >= 0);
  CHECK(b >= 0);
  CHECK(a != b);
  // the pair of generators of a 2-face never spans a third generator
  CHECK(o2[0].members.size() + o2[1].members.size() == f2.size());

  auto f3 = face_labels(pi2(), 3);
  auto o3 = face_orbits(group_g(), pi2(), f3);
  REQUIRE(o3.size() == 4);
  std::set<Dim3Type> types;
  for (const auto& o : o3) {
    std::set<Dim3Type> t;
    for (const auto& m : o.members) t.insert(classify_dim3(m));
    CHECK(t.size() == 1);
    types.insert(*t.begin());
  }
  CHECK(types.size() == 4);
  CHECK(classify_dim3(face_of({"x1^2", "x4^2", "(x1-x4)^2"})) == Dim3Type::RTstar);
  CHECK(classify_dim3(face_of({"x1^2", "x3^2", "x4^2"})) == Dim3Type::BFstar);
  CHECK(classify_dim3(face_of({"x1^2", "x2^2", "x3^2"})) == Dim3Type::String);
  CHECK(classify_dim3(face_of({"x1^2", "x2^2", "(x3-x4)^2"})) == Dim3Type::Disconnected);
}

TEST_CASE("opposite pairs of the six-generator face") {
  auto rep = mu6_representative();
  auto split = opposite_pairs(rep);
  CHECK(split.opposite.size() == 3);
  CHECK(split.non_opposite.size() == 12);
  // invariant description: no other generator of the face lies in the span of the pair
  auto in_span = [&](int x, int y, int z) {
    RatMatrix m;
    for (int i : {x, y, z}) {
      auto l = forms::rank_one_root(pi2()[i]);
      RatVector row;
      for (long c : l->coeffs()) row.emplace_back(c);
      m.push_back(row);
    }
    return rank(m) == 2;
  };
  for (const auto& [x, y] : split.opposite) {
    CHECK(is_opposite(rep, x, y));
    for (int z : rep.indices)
      if (z != x && z != y) CHECK_FALSE(in_span(x, y, z));
  }
  for (const auto& [x, y] : split.non_opposite) {
    CHECK_FALSE(is_opposite(rep, x, y));
    bool any = false;
    for (int z : rep.indices)
      if (z != x && z != y) any = any || in_span(x, y, z);
    CHECK(any);
  }
  // the split is carried along by G
  for (const auto& m : group_g().elements()) {
    auto perm = generator_permutation(m, pi2());
    auto moved = label(pi2(), apply_permutation(perm, rep.indices));
    CHECK(opposite_pairs(moved).opposite.size() == 3);
    break;
  }
  CHECK_THROWS_AS(opposite_pairs(face_of({"x1^2", "x2^2", "x3^2"})), InputError);
}

TEST_CASE("orbit csv has one line per face") {
  auto f2 = face_labels(pi2(), 2);
  auto csv = orbit_csv(face_orbits(group_g(), pi2(), f2), 2);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(f2.size()) + 1);
  CHECK(csv.rfind("indices,dimension,orbit,representative\n", 0) == 0);
}

TEST_CASE("vor3 maximal cones") {
  CHECK(is_vor3_maximal(atlas().pi1(3)));
  Cone small("s", 3, {atlas().form("g3:x1^2"), atlas().form("g3:x2^2"), atlas().form("g3:x3^2")});
  CHECK_FALSE(is_vor3_maximal(small));
}
