#pragma once

#include <string>

#include "nefcone/lattice_forms.hpp"

namespace nefcone::forms {

// A polynomial of degree at most 2 in x1..x4.
struct QuadraticPolynomial {
  int dim = 0;
  QuadForm quadratic;          // homogeneous degree-2 part
  std::vector<Rational> linear;
  Rational constant = 0;
};

// Parses expressions such as "2*x1^2 + x1*x2 - x3*x4", "(x1 - x3)^2 + 1/2*x2^2".
// dim = 0 infers the dimension from the highest variable index.
QuadraticPolynomial parse_polynomial(const std::string& text, int dim = 0);

// Accepts either polynomial notation (must be homogeneous of degree 2) or a raw
// U*-coordinate vector "[2,2,2,2,1,-1,-1,-1,-1,0]".
QuadForm parse_form(const std::string& text, int dim = 0);

LinearForm parse_linear(const std::string& text, int dim = 0);

// Monomial notation, e.g. "2*x1^2 + 2*x1*x2 - 2*x1*x3".
std::string format_form(const QuadForm& q);
// "[2,2,2,2,1,-1,-1,-1,-1,0]" with rationals as p/q.
std::string format_coords(const QuadForm& q);
std::string format_linear(const LinearForm& l);
std::string format_dual(const DualVector& d);

}  // namespace nefcone::forms
