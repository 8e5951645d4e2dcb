#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nefcone/cone.hpp"
#include "nefcone/rational.hpp"

namespace nefcone::nef {

// IGU: a L - b D^Igu.  VOR_D4: a L - b D4 - c E.  VOR: a L - b D^Vor - c E.
enum class Basis { IGU, VOR_D4, VOR };

std::string to_string(Basis b);
// Accepts "igu", "igusa", "vor-d4", "vor".
Basis parse_basis(const std::string& text);

struct DivisorClass {
  Basis basis = Basis::VOR_D4;
  Rational a, b, c;  // c must be 0 in the IGU basis
  int level = 1;

  bool operator==(const DivisorClass&) const = default;
};

DivisorClass make_class(Basis basis, Rational a, Rational b, Rational c, int level);

struct Constraint {
  std::string text;  // e.g. "a - 12b/n >= 0"
  Rational slack;    // left-hand side value
  bool satisfied() const { return slack >= 0; }
  bool active() const { return slack == 0; }
};

struct NefVerdict {
  bool nef = false;
  std::vector<Constraint> constraints;
  std::vector<std::string> active() const;
  std::vector<std::string> violated() const;
};

NefVerdict is_nef(const DivisorClass& d);
// Strict version of the IGU constraints; throws for other bases.
bool is_ample_interior(const DivisorClass& d);

// VOR_D4 <-> VOR by a L - b D4 - c E = a L - b D^Vor - (4b + c) E. IGU only
// converts to itself.
DivisorClass convert_basis(const DivisorClass& d, Basis target);

// Level-independent coefficients of the canonical class.
DivisorClass canonical_class(Basis basis, int level);

// Default epsilon in the 12 + epsilon bookkeeping of reports.
Rational default_epsilon();

// One group of permutations xi sharing the same data.
struct DepthCase {
  int k_size = 2;
  Rational gamma, delta;
  long count = 1;
  bool fibre = false;  // xi is a non-section case and contributes delta/6 through the fibre
};

struct DepthBound {
  int mu = 0;
  Rational b_coefficient;  // the bound is b_coefficient * b - c >= 0
  std::optional<Rational> threshold;  // b >= threshold * c suffices; empty when b_coefficient <= 0
  std::string form() const;
};

DepthBound depth_bound(int mu, const std::vector<DepthCase>& cases);

// gamma/delta data of every ordered pair of generators of sigma, each with
// weight (mu - 2)!. lower_gamma replaces gamma by delta. fibre marks pairs
// accepted by the predicate.
std::vector<DepthCase> depth_cases(const Cone& sigma, bool lower_gamma = false,
                                   const std::function<bool(int, int)>& fibre = {});

struct NamedDepthBound {
  std::string name;
  DepthBound bound;
  std::string face;
};
// string, bf, mu4, mu5, disconnected, mu6: the depth-3 cases.
NamedDepthBound depth3_bound(const std::string& name);
std::vector<std::string> depth3_case_names();

}  // namespace nefcone::nef
