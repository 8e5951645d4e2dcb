#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nefcone/rational.hpp"

namespace nefcone::ledger {

// Laurent polynomial in n with polynomial dependence on a, b, c.
class Coeff {
 public:
  using Exponents = std::array<int, 4>;  // n, a, b, c

  Coeff() = default;
  Coeff(const Rational& r);  // NOLINT(google-explicit-constructor)
  static Coeff variable(char v);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant() const;  // throws unless is_constant()
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  Coeff operator+(const Coeff& o) const;
  Coeff operator-(const Coeff& o) const;
  Coeff operator-() const;
  Coeff operator*(const Coeff& o) const;
  // Only monomial divisors are supported.
  Coeff operator/(const Coeff& o) const;
  bool operator==(const Coeff& o) const { return terms_ == o.terms_; }

  std::string to_string() const;

 private:
  std::map<Exponents, Rational> terms_;
  void add(const Exponents& e, const Rational& r);
};

// Linear combination of opaque divisor symbols; sorted, no zero terms.
class FormalDivisor {
 public:
  FormalDivisor() = default;
  static FormalDivisor symbol(const std::string& name);

  bool is_zero() const { return terms_.empty(); }
  const std::map<std::string, Coeff>& terms() const { return terms_; }
  Coeff coefficient(const std::string& name) const;

  FormalDivisor operator+(const FormalDivisor& o) const;
  FormalDivisor operator-(const FormalDivisor& o) const;
  FormalDivisor operator*(const Coeff& c) const;
  void add(const std::string& name, const Coeff& c);
  bool operator==(const FormalDivisor& o) const { return terms_ == o.terms_; }

  std::string to_string() const;

 private:
  std::map<std::string, Coeff> terms_;
};

struct Relation {
  std::string text;
  FormalDivisor combination;  // lhs - rhs, equal to zero
  std::string pivot;
};

struct Equation {
  std::string name;
  std::string text;
  FormalDivisor lhs, rhs;
};

struct Instance {
  std::string name;  // identity name plus parameter, e.g. "Smu[mu=4]"
  std::vector<Relation> relations;
  Equation claim;
  std::vector<Equation> controls;  // perturbed claims, expected to fail
};

struct Identity {
  std::string name;
  std::string text;
  std::vector<Instance> instances;
};

struct Registry {
  std::map<std::string, Identity> identities;
  std::vector<std::string> order;
  const Identity& get(const std::string& name) const;
};

Registry parse_identities(std::string_view text);
// The registry compiled into the library.
const Registry& registry();

// Exhaustive substitution of every pivot; throws on a substitution cycle.
FormalDivisor normalize(const FormalDivisor& d, const std::vector<Relation>& relations);

struct ControlResult {
  std::string name;
  FormalDivisor residual;
};

struct AuditResult {
  std::string identity;
  std::string instance;
  FormalDivisor residual;
  std::vector<ControlResult> controls;
  bool passed() const;  // zero residual and every control nonzero
};

std::vector<AuditResult> audit_instance_set(const Identity& id);
std::vector<AuditResult> audit_identity(const std::string& name, const Registry& reg = registry());

}  // namespace nefcone::ledger
