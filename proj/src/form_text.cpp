#include "nefcone/form_text.hpp"

#include <cctype>
#include <map>

namespace nefcone::forms {

namespace {

// Monomial key: (-1,-1) constant, (i,-1) linear, (i,j) with i <= j quadratic.
using Key = std::pair<int, int>;
using Poly = std::map<Key, Rational>;

Key combine(Key a, Key b) {
  std::vector<int> vars;
  for (int v : {a.first, a.second, b.first, b.second})
    if (v >= 0) vars.push_back(v);
  if (vars.size() > 2) throw InputError("polynomial degree exceeds 2");
  if (vars.empty()) return {-1, -1};
  if (vars.size() == 1) return {vars[0], -1};
  if (vars[0] > vars[1]) std::swap(vars[0], vars[1]);
  return {vars[0], vars[1]};
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) out[combine(ka, kb)] += ca * cb;
  return out;
}

Poly add(Poly a, const Poly& b, int sign) {
  for (const auto& [k, c] : b) a[k] += sign * c;
  return a;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }
  int max_var() const { return max_var_; }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw InputError(what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

  Poly expr() {
    Poly acc;
    int sign = 1;
    if (eat('-')) sign = -1;
    else eat('+');
    acc = add(acc, term(), sign);
    while (true) {
      if (eat('+')) acc = add(acc, term(), 1);
      else if (eat('-')) acc = add(acc, term(), -1);
      else break;
    }
    return acc;
  }

  Poly term() {
    Poly acc = power();
    while (true) {
      if (eat('*')) {
        acc = mul(acc, power());
      } else if (eat('/')) {
        Poly d = power();
        if (d.size() != 1 || d.begin()->first != Key{-1, -1} || d.begin()->second == 0)
          fail("division by a non-constant");
        Rational inv = 1 / d.begin()->second;
        for (auto& [k, c] : acc) c *= inv;
      } else {
        skip();
        // implicit product such as "2x1" or "2(x1-x2)^2"
        if (pos_ < s_.size() && (s_[pos_] == 'x' || s_[pos_] == '(')) acc = mul(acc, power());
        else break;
      }
    }
    return acc;
  }

  Poly power() {
    Poly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      int e = std::stoi(s_.substr(start, pos_ - start));
      Poly r{{{-1, -1}, Rational(1)}};
      for (int i = 0; i < e; ++i) r = mul(r, base);
      return r;
    }
    return base;
  }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      Poly p = power();
      for (auto& [k, v] : p) v = -v;
      return p;
    }
    if (c == 'x') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index");
      int idx = std::stoi(s_.substr(start, pos_ - start));
      if (idx < 1 || idx > kMaxDim) fail("variable index out of range");
      max_var_ = std::max(max_var_, idx);
      return Poly{{{idx - 1, -1}, Rational(1)}};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return Poly{{{-1, -1}, parse_rational(s_.substr(start, pos_ - start))}};
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int max_var_ = 0;
};

QuadForm parse_coordinate_vector(const std::string& text, int dim) {
  std::string body = text;
  auto open = body.find('['), close = body.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw InputError("malformed coordinate vector '" + text + "'");
  body = body.substr(open + 1, close - open - 1);
  std::vector<Rational> coords;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto comma = body.find(',', start);
    std::string item = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    coords.push_back(parse_rational(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  int g = 0;
  for (int d = 1; d <= kMaxDim; ++d)
    if (coord_count(d) == static_cast<int>(coords.size())) g = d;
  if (g == 0) throw InputError("coordinate vector length matches no dimension: '" + text + "'");
  if (dim != 0 && dim != g) throw InputError("coordinate vector has dimension " + std::to_string(g));
  return QuadForm(g, coords);
}

}  // namespace

QuadraticPolynomial parse_polynomial(const std::string& text, int dim) {
  Parser p(text);
  Poly poly = p.parse();
  int g = dim == 0 ? std::max(1, p.max_var()) : dim;
  if (p.max_var() > g) throw InputError("variable index exceeds dimension in '" + text + "'");
  QuadraticPolynomial out;
  out.dim = g;
  out.linear.assign(g, Rational(0));
  std::vector<Rational> coords(coord_count(g), Rational(0));
  for (const auto& [k, c] : poly) {
    if (k.first < 0) out.constant += c;
    else if (k.second < 0) out.linear[k.first] += c;
    else if (k.first == k.second) coords[coord_index(g, k.first, k.first)] += c;
    else coords[coord_index(g, k.first, k.second)] += c / 2;
  }
  out.quadratic = QuadForm(g, coords);
  return out;
}

QuadForm parse_form(const std::string& text, int dim) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '[') return parse_coordinate_vector(text, dim);
    break;
  }
  QuadraticPolynomial p = parse_polynomial(text, dim);
  if (p.constant != 0) throw InputError("form has a constant term: '" + text + "'");
  for (const auto& c : p.linear)
    if (c != 0) throw InputError("form has a linear term: '" + text + "'");
  return p.quadratic;
}

LinearForm parse_linear(const std::string& text, int dim) {
  QuadraticPolynomial p = parse_polynomial(text, dim);
  if (p.constant != 0 || !p.quadratic.is_zero()) throw InputError("not a linear form: '" + text + "'");
  std::vector<long> c;
  for (const auto& x : p.linear) {
    if (!is_integer(x)) throw InputError("linear form coefficients must be integers");
    c.push_back(x.get_num().get_si());
  }
  return LinearForm(c);
}

namespace {

void append_term(std::string& out, const Rational& coef, const std::string& mono) {
  if (coef == 0) return;
  Rational a = abs(coef);
  if (out.empty()) out += coef < 0 ? "-" : "";
  else out += coef < 0 ? " - " : " + ";
  if (mono.empty()) {
    out += to_string(a);
    return;
  }
  if (a != 1) out += to_string(a) + "*";
  out += mono;
}

}  // namespace

std::string format_form(const QuadForm& q) {
  std::string out;
  int g = q.dim();
  for (int i = 0; i < g; ++i) append_term(out, q.at(i, i), "x" + std::to_string(i + 1) + "^2");
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j)
      append_term(out, 2 * q.at(i, j), "x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1));
  return out.empty() ? "0" : out;
}

std::string format_coords(const QuadForm& q) {
  std::vector<std::string> parts;
  for (const auto& c : q.coords()) parts.push_back(to_string(c));
  return "[" + join(parts, ",") + "]";
}

std::string format_linear(const LinearForm& l) {
  std::string out;
  for (int i = 0; i < l.dim(); ++i) append_term(out, Rational(l[i]), "x" + std::to_string(i + 1));
  return out.empty() ? "0" : out;
}

std::string format_dual(const DualVector& d) {
  std::vector<std::string> parts;
  for (const auto& c : d.coords()) parts.push_back(to_string(c));
  return "[" + join(parts, ",") + "]";
}

}  // namespace nefcone::forms
