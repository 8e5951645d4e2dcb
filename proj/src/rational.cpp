#include "nefcone/rational.hpp"

#include <cctype>

namespace nefcone {

std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  if (text.empty()) throw InputError("empty rational");
  auto valid_int = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto slash = text.find('/');
  auto dot = text.find('.');
  if (slash != std::string::npos) {
    std::string p = text.substr(0, slash), q = text.substr(slash + 1);
    if (!valid_int(p, true) || !valid_int(q, false))
      throw InputError("malformed rational '" + raw + "'");
    if (p[0] == '+') p.erase(0, 1);
    Integer den(q);
    if (den == 0) throw InputError("zero denominator in '" + raw + "'");
    Rational r(Integer(p), den);
    r.canonicalize();
    return r;
  }
  if (dot != std::string::npos) {
    std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip.erase(0, 1);
    if (ip.empty()) ip = "0";
    if (!valid_int(ip, false) || (!fp.empty() && !valid_int(fp, false)))
      throw InputError("malformed decimal '" + raw + "'");
    Integer den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    Rational r(Integer(ip + fp), den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  if (!valid_int(text, true)) throw InputError("malformed rational '" + raw + "'");
  if (text[0] == '+') text.erase(0, 1);
  return Rational(Integer(text));
}

Rational floor_q(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

Rational ceil_q(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

Integer isqrt_floor(const Integer& n) {
  if (n < 0) throw InputError("isqrt of a negative number");
  Integer s;
  mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
  return s;
}

Rational sqrt_upper(const Rational& r, const Integer& scale) {
  if (r < 0) throw InputError("sqrt of a negative number");
  // sqrt(p/q) * scale = sqrt(p*q*scale^2) / q
  Integer p = r.get_num(), q = r.get_den();
  Integer t = p * q * scale * scale;
  Integer s = isqrt_floor(t);
  if (s * s != t) s += 1;
  Rational u(s, q * scale);
  u.canonicalize();
  return u;
}

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace nefcone
