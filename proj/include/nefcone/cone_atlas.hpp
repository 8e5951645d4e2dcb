#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nefcone/cone.hpp"
#include "nefcone/cone_engine.hpp"

namespace nefcone::cone_atlas {

using forms::LatticeMap;
using forms::QuadForm;

struct DualBasis {
  std::string cone;  // e.g. "x1^2+e": the cone spanned by those forms
  std::vector<std::string> names;
  std::vector<forms::DualVector> vectors;
};

// Named constants read from the versioned atlas file.
class Atlas {
 public:
  const QuadForm& form(const std::string& name) const;
  const Cone& cone(const std::string& name) const;
  const RatMatrix& ymap(const std::string& name) const;
  const DualBasis& dual_basis(const std::string& cone) const;

  const Cone& pi1(int g) const { return cone("pi1_" + std::to_string(g)); }
  const Cone& pi2_4() const { return cone("pi2_4"); }
  const Cone& pi2(int i) const { return cone("pi2_" + std::to_string(i)); }
  const QuadForm& e() const { return form("e"); }
  const QuadForm& e_prime() const { return form("e'"); }

  std::vector<std::string> form_names() const;
  std::vector<std::string> cone_names() const;

  friend Atlas parse_atlas(std::string_view text);

 private:
  std::map<std::string, QuadForm> forms_;
  std::vector<std::string> form_order_;
  std::map<std::string, Cone> cones_;
  std::vector<std::string> cone_order_;
  std::map<std::string, RatMatrix> ymaps_;
  std::map<std::string, DualBasis> dual_bases_;
};

Atlas parse_atlas(std::string_view text);
// The atlas compiled into the library.
const Atlas& atlas();

class MatrixGroup {
 public:
  MatrixGroup() = default;
  MatrixGroup(std::vector<LatticeMap> generators, std::vector<LatticeMap> elements);

  const std::vector<LatticeMap>& generators() const { return gens_; }
  const std::vector<LatticeMap>& elements() const { return elems_; }
  std::size_t order() const { return elems_.size(); }
  bool contains(const LatticeMap& m) const;

 private:
  std::vector<LatticeMap> gens_;
  std::vector<LatticeMap> elems_;  // sorted
};

MatrixGroup generate_group(const std::vector<LatticeMap>& gens, std::size_t cap = 10000);

// G and G1 in x-coordinates, generated once and cached.
const MatrixGroup& group_g();
const MatrixGroup& group_g1();
// x-coordinate versions of the atlas y-maps; "w'" is s14 s23 w.
LatticeMap x_map(const std::string& name);

struct OrbitStabilizer {
  std::vector<QuadForm> orbit;  // primitive generators, sorted
  MatrixGroup stabilizer;
};
OrbitStabilizer orbit_and_stabilizer(const MatrixGroup& grp, const QuadForm& ray);

// Image of each generator index under m, or an error if m does not permute the generators.
std::vector<int> generator_permutation(const LatticeMap& m, const Cone& cone);
std::vector<int> apply_permutation(const std::vector<int>& perm, const std::vector<int>& indices);

struct FaceOrbit {
  FaceLabel representative;
  std::vector<FaceLabel> members;
};
std::vector<FaceOrbit> face_orbits(const MatrixGroup& grp, const Cone& cone, const std::vector<FaceLabel>& faces);

// Faces of the given rank as labels, validated by is_face.
std::vector<FaceLabel> face_labels(const Cone& cone, int rank);

enum class Colour { Black, Red };

struct Edge {
  int a, b;  // 1-based vertices, a < b
  Colour colour;
  auto operator<=>(const Edge&) const = default;
};

// Vertices numbered clockwise from the top left. A pair may carry both colours.
class BicolouredGraph {
 public:
  void add(int a, int b, Colour c);
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool has(int a, int b, Colour c) const;
  bool triangular() const;  // three distinct pairs forming a triangle
  bool forked() const;      // three distinct pairs through one vertex
  bool connected() const;   // underlying simple graph, ignoring isolated vertices
  int red_count() const;
  std::string to_string() const;
  bool operator==(const BicolouredGraph& o) const { return edges_ == o.edges_; }

 private:
  std::vector<Edge> edges_;  // sorted
};

// beta_ij (black) or rho_ij (red) label of a generator of the second perfect cone.
Edge generator_edge(int index);
int generator_of_edge(const Edge& e);

enum class GraphMode { Vanishing, Nonvanishing };
BicolouredGraph face_graph(const FaceLabel& face, GraphMode mode);

enum class FacetType { RT, BF };
FacetType facet_type(const FaceLabel& facet);
std::string to_string(FacetType t);

enum class Dim3Type { String, BFstar, RTstar, Disconnected };
Dim3Type classify_dim3(const FaceLabel& face);
std::string to_string(Dim3Type t);

struct AdjoiningFacets {
  std::vector<FaceLabel> facets;
  int rt = 0;
  int bf = 0;
};
AdjoiningFacets facets_adjoining(const QuadForm& ray);

// All 64 facets of the second perfect cone (cached).
const std::vector<FaceLabel>& pi2_facets();

// True when the cone is one of the maximal cones of the second Voronoi fan in
// dimension 3, i.e. a GL(3,Z)-translate of the principal cone.
bool is_vor3_maximal(const Cone& image);

enum class G1Class { Pi2_1, Pi2_2, Pi2_3 };
G1Class g1_class(const FaceLabel& facet);
std::string to_string(G1Class c);

struct PairSplit {
  std::vector<std::pair<int, int>> opposite;      // generator indices of the parent
  std::vector<std::pair<int, int>> non_opposite;
};
// The face of rank 3 with six generators used in the depth-3 analysis.
FaceLabel mu6_representative();
PairSplit opposite_pairs(const FaceLabel& face);
bool is_opposite(const FaceLabel& face, int a, int b);

// CSV lines "indices,dimension,orbit,representative".
std::string orbit_csv(const std::vector<FaceOrbit>& orbits, int dimension);

FaceLabel label(const Cone& parent, std::vector<int> indices);
// Label of the face of the second perfect cone spanned by the given forms.
FaceLabel pi2_face(const std::vector<QuadForm>& gens);

}  // namespace nefcone::cone_atlas
