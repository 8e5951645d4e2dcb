#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace nefcone {

using Rational = mpq_class;
using Integer = mpz_class;

// Raised for malformed input and violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an exact computation detects an inconsistency in its data.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Accepts "p", "p/q", "-p/q" and plain decimals such as "0.25".
Rational parse_rational(const std::string& text);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

Rational floor_q(const Rational& r);
Rational ceil_q(const Rational& r);

// Largest integer s with s*s <= n, n >= 0.
Integer isqrt_floor(const Integer& n);

// Rational upper bound u >= sqrt(r) with |u - sqrt(r)| <= 1/scale.
Rational sqrt_upper(const Rational& r, const Integer& scale);

Integer factorial(int n);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace nefcone
