#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nefcone/cone.hpp"

namespace nefcone::cones {

using forms::DualVector;
using forms::LinearForm;
using forms::QuadForm;

struct Membership {
  bool member = false;
  RatVector coefficients;  // one per generator when member
  DualVector separator;    // pairs >= 0 with all generators and < 0 with q otherwise
};

// Exact LP membership. A nonempty objective picks a particular vertex of the
// certificate polytope (used to produce independent certificates).
Membership member(const Cone& cone, const QuadForm& q, const RatVector& objective = {});

struct FaceTest {
  bool is_face = false;
  DualVector support;  // vanishes on the subset, >= 1 on the other generators
};
FaceTest is_face(const Cone& cone, const std::vector<int>& subset);

// Rank of the span of the chosen generators.
int span_rank(const Cone& cone, const std::vector<int>& subset);

struct DualDescription {
  std::string cone;
  int dim = 0;
  std::vector<DualVector> lineality;  // integral basis, reduced echelon order
  std::vector<DualVector> rays;       // primitive, reduced modulo lineality, sorted
  std::vector<DualVector> lattice_basis;  // optional monomial coordinates
  std::vector<std::string> basis_names;

  bool in_lineality(const DualVector& v) const;
  // True when v is a positive multiple of a listed ray modulo the lineality space.
  bool is_ray(const DualVector& v) const;
  // Reduction of v modulo the lineality space.
  DualVector reduce(const DualVector& v) const;
};

DualDescription dual_description(const Cone& cone);

// Attaches monomial coordinates; checks that the basis is unimodular, that its
// first vectors are the rays and that the rest span the lineality space.
void attach_lattice_basis(DualDescription& dd, const std::vector<DualVector>& basis,
                          const std::vector<std::string>& names);

std::vector<long> monomial_exponents(const DualDescription& dd, const DualVector& target);

// Generator index sets of all faces of the given rank, and of the facets.
std::vector<std::vector<int>> faces_of_rank(const Cone& cone, int rank);
std::vector<std::vector<int>> facets(const Cone& cone);

struct TargetCheck {
  std::string target;
  bool image_in_target = false;
  bool target_in_image = false;
};
struct ProjectionReport {
  std::string cone;
  int axis = 0;
  Cone image;  // primitive images of the nonzero projected generators
  int image_rank = 0;
  std::vector<TargetCheck> checks;
  std::optional<std::string> container;  // first target containing the image
  bool equal = false;                     // image equals the container
};
ProjectionReport project_and_check(const Cone& cone, int axis, const std::vector<Cone>& targets);

struct DicingResult {
  bool dicing = true;
  std::vector<int> witness;  // offending subset
  long determinant = 1;
};
DicingResult is_dicing(const std::vector<LinearForm>& forms);

// Conewise-linear function on a fragment of a fan made of basic cones of
// squares. Values are attached to primitive sign-normalised linear forms l,
// standing for the ray through l^2.
class SupportFunction {
 public:
  using RayValue = std::function<Rational(const LinearForm&)>;

  // The translates of the principal cone of dimension g whose rays are squares
  // of forms with coefficients in [-2, 2].
  static SupportFunction voronoi_fragment(int g, RayValue value, std::string name);
  // psi_g: value 1 on every ray.
  static SupportFunction unit(int g);

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  std::size_t cone_count() const { return cones_->size(); }
  const std::vector<std::vector<LinearForm>>& cones() const { return *cones_; }
  Rational ray_value(const LinearForm& l) const { return value_(l.primitive().sign_normalized()); }

 private:
  int dim_ = 0;
  std::string name_;
  const std::vector<std::vector<LinearForm>>* cones_ = nullptr;
  RayValue value_;
};

struct SupportCertificate {
  Rational value;
  std::vector<LinearForm> rays;
  RatVector coefficients;
};

// Value from the first fragment cone containing q; the start offset rotates the
// search order so that different cones are tried first.
SupportCertificate support_certificate(const SupportFunction& psi, const QuadForm& q,
                                       std::size_t start = 0);
Rational support_eval(const SupportFunction& psi, const QuadForm& q);

struct GammaDelta {
  int k_size = 0;
  Rational gamma;
  Rational delta;
  std::vector<LinearForm> k;  // restricted forms in K
  LinearForm m;               // the unique form after the second restriction
};

// sigma: rank-one generators spanning a 3-dimensional space of linear forms;
// xi: 1-based positions in sigma's generator list.
GammaDelta gamma_delta(const Cone& sigma, std::pair<int, int> xi);

// LLL-reduced version of a lattice basis (rows), exact arithmetic.
IntMatrix lll_reduce(IntMatrix basis);

}  // namespace nefcone::cones
