#pragma once

#include "nefcone/linalg.hpp"

namespace nefcone::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  RatVector x;       // primal solution when Optimal
  Rational value;    // objective value when Optimal
  // When Infeasible: y with y^T A >= 0 componentwise and y^T b < 0.
  RatVector farkas;
};

// Exact two-phase simplex with Bland's rule for
//   minimize c^T x  subject to  A x = b, x >= 0.
// An empty c asks for feasibility only.
Result solve(const RatMatrix& a, const RatVector& b, const RatVector& c = {});

}  // namespace nefcone::lp
