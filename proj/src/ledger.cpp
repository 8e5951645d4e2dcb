#include "nefcone/ledger.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "nefcone/cone_atlas.hpp"
#include "nefcone/cone_engine.hpp"

namespace nefcone::embedded {
extern const std::string_view identities_text;
}

namespace nefcone::ledger {

// ---- Coeff

Coeff::Coeff(const Rational& r) {
  if (r != 0) terms_[{0, 0, 0, 0}] = r;
}

Coeff Coeff::variable(char v) {
  static const std::string names = "nabc";
  auto pos = names.find(v);
  if (pos == std::string::npos) throw InputError(std::string("unknown coefficient variable ") + v);
  Coeff c;
  Exponents e{0, 0, 0, 0};
  e[pos] = 1;
  c.terms_[e] = 1;
  return c;
}

bool Coeff::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{0, 0, 0, 0});
}

Rational Coeff::constant() const {
  if (!is_constant()) throw InputError("expected a number, got " + to_string());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

void Coeff::add(const Exponents& e, const Rational& r) {
  Rational v = terms_[e] + r;
  if (v == 0)
    terms_.erase(e);
  else
    terms_[e] = v;
}

Coeff Coeff::operator+(const Coeff& o) const {
  Coeff out = *this;
  for (const auto& [e, r] : o.terms_) out.add(e, r);
  return out;
}

Coeff Coeff::operator-() const {
  Coeff out;
  for (const auto& [e, r] : terms_) out.terms_[e] = -r;
  return out;
}

Coeff Coeff::operator-(const Coeff& o) const { return *this + (-o); }

Coeff Coeff::operator*(const Coeff& o) const {
  Coeff out;
  for (const auto& [e1, r1] : terms_)
    for (const auto& [e2, r2] : o.terms_) {
      Exponents e;
      for (int i = 0; i < 4; ++i) e[i] = e1[i] + e2[i];
      if (e[1] < 0 || e[2] < 0 || e[3] < 0) throw InputError("negative power of a, b or c");
      out.add(e, r1 * r2);
    }
  return out;
}

Coeff Coeff::operator/(const Coeff& o) const {
  if (o.terms_.size() != 1) throw InputError("division by " + (o.is_zero() ? std::string("zero") : "(" + o.to_string() + ")") + " is not supported");
  const auto& [e, r] = *o.terms_.begin();
  if (e[1] || e[2] || e[3]) throw InputError("division by a, b or c is not supported");
  Coeff inv;
  inv.terms_[{-e[0], 0, 0, 0}] = 1 / r;
  return *this * inv;
}

std::string Coeff::to_string() const {
  if (terms_.empty()) return "0";
  static const char names[] = "nabc";
  std::vector<std::string> parts;
  // a, b, c before n; higher degree first
  std::vector<std::pair<Exponents, Rational>> ts(terms_.begin(), terms_.end());
  std::sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
    return std::tie(y.first[1], y.first[2], y.first[3], y.first[0]) < std::tie(x.first[1], x.first[2], x.first[3], x.first[0]);
  });
  std::string out;
  for (std::size_t t = 0; t < ts.size(); ++t) {
    const auto& [e, r] = ts[t];
    Rational m = abs(r);
    std::string num, den;
    std::vector<std::string> vars;
    for (int i : {1, 2, 3, 0}) {
      if (e[i] > 0) vars.push_back(std::string(1, names[i]) + (e[i] > 1 ? "^" + std::to_string(e[i]) : ""));
    }
    if (m.get_num() != 1 || vars.empty()) num = m.get_num().get_str();
    for (const auto& v : vars) num += (num.empty() ? "" : "*") + v;
    if (m.get_den() != 1) den = m.get_den().get_str();
    if (e[0] < 0) den += (den.empty() ? "" : "*") + std::string("n") + (e[0] < -1 ? "^" + std::to_string(-e[0]) : "");
    std::string term = num + (den.empty() ? "" : "/" + (den.find('*') != std::string::npos ? "(" + den + ")" : den));
    if (t == 0)
      out = (r < 0 ? "-" : "") + term;
    else
      out += (r < 0 ? " - " : " + ") + term;
  }
  return out;
}

// ---- FormalDivisor

FormalDivisor FormalDivisor::symbol(const std::string& name) {
  FormalDivisor d;
  d.terms_[name] = Rational(1);
  return d;
}

Coeff FormalDivisor::coefficient(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? Coeff() : it->second;
}

void FormalDivisor::add(const std::string& name, const Coeff& c) {
  Coeff v = coefficient(name) + c;
  if (v.is_zero())
    terms_.erase(name);
  else
    terms_[name] = v;
}

FormalDivisor FormalDivisor::operator+(const FormalDivisor& o) const {
  FormalDivisor out = *this;
  for (const auto& [s, c] : o.terms_) out.add(s, c);
  return out;
}

FormalDivisor FormalDivisor::operator-(const FormalDivisor& o) const { return *this + o * Coeff(Rational(-1)); }

FormalDivisor FormalDivisor::operator*(const Coeff& c) const {
  FormalDivisor out;
  if (c.is_zero()) return out;
  for (const auto& [s, v] : terms_) out.add(s, v * c);
  return out;
}

std::string FormalDivisor::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : terms_) {
    std::string cs = c.to_string();
    bool negative = c.is_monomial() && c.terms().begin()->second < 0;
    if (negative) cs = cs.substr(1);
    std::string term;
    if (cs == "1")
      term = s;
    else if (c.is_monomial())
      term = cs + "*" + s;
    else
      term = "(" + cs + ")*" + s;
    if (first)
      out = (negative ? "-" : "") + term;
    else
      out += (negative ? " - " : " + ") + term;
    first = false;
  }
  return out;
}

// ---- parsing

namespace {

struct Token {
  enum Kind { Num, Name, Str, Op, End } kind;
  std::string text;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '|' || c == '.';
}

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Num, s.substr(i, j - i)});
      i = j;
    } else if (name_start(c)) {
      std::size_t j = i;
      while (j < s.size()) {
        if (name_char(s[j])) {
          ++j;
        } else if (s[j] == '[') {
          auto close = s.find(']', j);
          if (close == std::string::npos) throw InputError("unbalanced '[' in '" + s + "'");
          j = close + 1;
        } else {
          break;
        }
      }
      out.push_back({Token::Name, s.substr(i, j - i)});
      i = j;
    } else if (c == '"') {
      auto close = s.find('"', i + 1);
      if (close == std::string::npos) throw InputError("unterminated string in '" + s + "'");
      out.push_back({Token::Str, s.substr(i + 1, close - i - 1)});
      i = close + 1;
    } else if (std::string("+-*/(){},\\^").find(c) != std::string::npos) {
      out.push_back({Token::Op, std::string(1, c)});
      ++i;
    } else {
      throw InputError(std::string("unexpected character '") + c + "' in '" + s + "'");
    }
  }
  out.push_back({Token::End, ""});
  return out;
}

using Set = std::vector<std::string>;

struct Env {
  std::map<std::string, std::string> vars;
  std::map<std::string, Set> sets;
};

// Divisor-valued expression; the symbol "" carries the scalar part.
using Value = FormalDivisor;

bool is_scalar(const Value& v) {
  return v.terms().empty() || (v.terms().size() == 1 && v.terms().begin()->first.empty());
}
Coeff scalar_of(const Value& v) { return v.coefficient(""); }
Value from_scalar(const Coeff& c) {
  Value v;
  v.add("", c);
  return v;
}

bool is_integer_text(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  return i < s.size() && std::all_of(s.begin() + i, s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

Rational psi3_along_x1(const forms::QuadForm& q) {
  static const auto psi = cones::SupportFunction::unit(3);
  return cones::support_eval(psi, forms::project(q, 1));
}

class ExprParser {
 public:
  ExprParser(const std::string& text, const Env& env) : text_(text), toks_(tokenize(text)), env_(env) {}

  Value parse_all() {
    Value v = expr();
    expect_end();
    return v;
  }
  Set parse_set_all() {
    Set s = set_expr();
    expect_end();
    return s;
  }
  // Symbol name with bracket indices substituted.
  std::string parse_symbol_all() {
    const Token& t = next();
    if (t.kind != Token::Name) fail("expected a symbol");
    expect_end();
    return substitute(t.text);
  }

 private:
  std::string text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Env& env_;

  [[noreturn]] void fail(const std::string& msg) const { throw InputError(msg + " in '" + text_ + "'"); }
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(const std::string& op) {
    if (peek().kind == Token::Op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& op) {
    if (!accept(op)) fail("expected '" + op + "'");
  }
  void expect_end() const {
    if (peek().kind != Token::End) fail("unexpected '" + peek().text + "'");
  }

  std::string substitute(const std::string& name) const {
    std::string out;
    std::size_t i = 0;
    while (i < name.size()) {
      if (name[i] != '[') {
        out += name[i++];
        continue;
      }
      auto close = name.find(']', i);
      std::string inner = name.substr(i + 1, close - i - 1);
      std::vector<std::string> items;
      std::stringstream ss(inner);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        auto it = env_.vars.find(item);
        items.push_back(it != env_.vars.end() ? it->second : item);
      }
      out += "[" + join(items, ",") + "]";
      i = close + 1;
    }
    return out;
  }

  Value expr() {
    Value v;
    bool negate = false;
    if (accept("-"))
      negate = true;
    else
      accept("+");
    v = term();
    if (negate) v = v * Coeff(Rational(-1));
    while (true) {
      if (accept("+"))
        v = v + term();
      else if (accept("-"))
        v = v - term();
      else
        break;
    }
    return v;
  }

  bool starts_factor() const {
    const Token& t = peek();
    return t.kind == Token::Num || t.kind == Token::Name || (t.kind == Token::Op && t.text == "(");
  }

  Value multiply(const Value& x, const Value& y) {
    if (is_scalar(x)) return y * scalar_of(x);
    if (is_scalar(y)) return x * scalar_of(y);
    fail("product of two divisors");
  }

  Value term() {
    Value v = power();
    while (true) {
      if (accept("*")) {
        v = multiply(v, power());
      } else if (accept("/")) {
        Value d = power();
        if (!is_scalar(d)) fail("division by a divisor");
        v = v * (Coeff(Rational(1)) / scalar_of(d));
      } else if (starts_factor()) {
        v = multiply(v, power());
      } else {
        break;
      }
    }
    return v;
  }

  Value power() {
    Value v = factor();
    if (accept("^")) {
      const Token& t = next();
      if (t.kind != Token::Num) fail("expected an integer exponent");
      if (!is_scalar(v)) fail("power of a divisor");
      Coeff base = scalar_of(v), r(Rational(1));
      for (int i = 0; i < std::stoi(t.text); ++i) r = r * base;
      v = from_scalar(r);
    }
    return v;
  }

  Coeff scalar_arg() {
    Value v = expr();
    if (!is_scalar(v)) fail("expected a scalar argument");
    return scalar_of(v);
  }

  Value factor() {
    const Token& t = next();
    if (t.kind == Token::Num) return from_scalar(Coeff(Rational(Integer(t.text))));
    if (t.kind == Token::Op && t.text == "(") {
      Value v = expr();
      expect(")");
      return v;
    }
    if (t.kind != Token::Name) fail("unexpected '" + t.text + "'");
    const std::string& name = t.text;
    if (name == "sum") {
      expect("(");
      const Token& var = next();
      if (var.kind != Token::Name) fail("expected a loop variable");
      const Token& in = next();
      if (in.kind != Token::Name || in.text != "in") fail("expected 'in'");
      Set s = set_expr();
      expect(")");
      std::size_t body = pos_;
      Value total;
      Env inner = env_;
      // An empty range still parses its body once, with a placeholder binding.
      Set values = s.empty() ? Set{"1"} : s;
      for (const auto& el : values) {
        inner.vars[var.text] = el;
        ExprParser sub(text_, inner);
        sub.pos_ = body;
        Value v = sub.term();
        if (!s.empty()) total = total + v;
        pos_ = sub.pos_;
      }
      return total;
    }
    if (name == "fact") {
      expect("(");
      Rational x = scalar_arg().constant();
      expect(")");
      if (!is_integer(x) || x < 0) fail("fact needs a nonnegative integer");
      return from_scalar(Coeff(Rational(factorial(static_cast<int>(x.get_num().get_si())))));
    }
    if (name == "psi3") {
      expect("(");
      forms::QuadForm q;
      if (peek().kind == Token::Str) {
        q = cone_atlas::atlas().form(next().text);
      } else {
        Rational k = scalar_arg().constant();
        const Cone& p = cone_atlas::atlas().pi2_4();
        if (!is_integer(k) || k < 1 || k > static_cast<long>(p.size())) fail("generator index out of range");
        q = p[k.get_num().get_si() - 1];
      }
      expect(")");
      return from_scalar(Coeff(psi3_along_x1(q)));
    }
    if (name.size() == 1 && std::string("nabc").find(name) != std::string::npos) return from_scalar(Coeff::variable(name[0]));
    auto it = env_.vars.find(name);
    if (it != env_.vars.end()) {
      if (!is_integer_text(it->second)) fail("variable " + name + " is not numeric");
      return from_scalar(Coeff(Rational(Integer(it->second))));
    }
    return Value::symbol(substitute(name));
  }

  Set set_expr() {
    Set s = set_primary();
    while (true) {
      if (accept("\\")) {
        Set r = set_primary();
        Set out;
        for (const auto& x : s)
          if (std::find(r.begin(), r.end(), x) == r.end()) out.push_back(x);
        s = out;
      } else if (accept("+")) {
        for (const auto& x : set_primary())
          if (std::find(s.begin(), s.end(), x) == s.end()) s.push_back(x);
      } else {
        break;
      }
    }
    return s;
  }

  Set set_primary() {
    const Token& t = next();
    if (t.kind == Token::Op && t.text == "{") {
      Set s;
      if (accept("}")) return s;
      do {
        const Token& el = next();
        if (el.kind != Token::Name && el.kind != Token::Num) fail("bad set element");
        auto it = env_.vars.find(el.text);
        std::string v = it != env_.vars.end() ? it->second : el.text;
        if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
      } while (accept(","));
      expect("}");
      return s;
    }
    if (t.kind == Token::Op && t.text == "(") {
      Set s = set_expr();
      expect(")");
      return s;
    }
    if (t.kind == Token::Name && t.text == "range") {
      expect("(");
      Rational lo = scalar_arg().constant();
      expect(",");
      Rational hi = scalar_arg().constant();
      expect(")");
      Set s;
      for (long k = lo.get_num().get_si(); k <= hi.get_num().get_si(); ++k) s.push_back(std::to_string(k));
      return s;
    }
    if (t.kind == Token::Name) {
      auto it = env_.sets.find(t.text);
      if (it == env_.sets.end()) fail("unknown set '" + t.text + "'");
      return it->second;
    }
    fail("expected a set");
  }
};

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

// Position of the top-level '=' (outside parentheses), or npos.
std::size_t top_level_equals(const std::string& s) {
  int depth = 0;
  std::size_t found = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(' || s[i] == '[' || s[i] == '{') ++depth;
    if (s[i] == ')' || s[i] == ']' || s[i] == '}') --depth;
    if (s[i] == '=' && depth == 0) {
      if (found != std::string::npos) throw InputError("more than one '=' in '" + s + "'");
      found = i;
    }
  }
  return found;
}

struct Block {
  std::string name;
  std::string text;
  std::string param;
  long lo = 0, hi = -1;
  std::vector<std::pair<int, std::string>> lines;
};

struct Builder {
  Instance inst;
  Env env;
  std::set<std::string> pivots;

  std::pair<Value, Value> equation(const std::string& body) {
    auto eq = top_level_equals(body);
    if (eq == std::string::npos) throw InputError("expected an equation in '" + body + "'");
    Value l = ExprParser(body.substr(0, eq), env).parse_all();
    Value r = ExprParser(body.substr(eq + 1), env).parse_all();
    if (!l.coefficient("").is_zero() || !r.coefficient("").is_zero())
      throw InputError("scalar term in divisor equation '" + body + "'");
    return {l, r};
  }

  void statement(const std::string& line) {
    if (starts_with(line, "for ")) {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw InputError("expected ':' after for clause in '" + line + "'");
      std::string head = trim(line.substr(4, colon - 4));
      auto in = head.find(" in ");
      if (in == std::string::npos) throw InputError("expected 'in' in '" + line + "'");
      std::string var = trim(head.substr(0, in));
      Set s = ExprParser(head.substr(in + 4), env).parse_set_all();
      std::string rest = trim(line.substr(colon + 1));
      auto saved = env.vars;
      for (const auto& el : s) {
        env.vars[var] = el;
        statement(rest);
      }
      env.vars = saved;
    } else if (starts_with(line, "set ")) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw InputError("expected '=' in '" + line + "'");
      env.sets[trim(line.substr(4, eq - 4))] = ExprParser(line.substr(eq + 1), env).parse_set_all();
    } else if (starts_with(line, "relation ")) {
      std::string body = line.substr(9);
      std::string pivot;
      auto sv = body.rfind(" solve ");
      if (sv != std::string::npos) {
        pivot = ExprParser(body.substr(sv + 7), env).parse_symbol_all();
        body = body.substr(0, sv);
      }
      auto [l, r] = equation(body);
      if (pivot.empty()) {
        if (l.terms().size() != 1) throw InputError("relation needs 'solve' when the left side is not one symbol: '" + body + "'");
        pivot = l.terms().begin()->first;
      }
      Relation rel{trim(body), l - r, pivot};
      if (rel.combination.coefficient(pivot).is_zero())
        throw InputError("pivot " + pivot + " does not occur in '" + body + "'");
      if (!pivots.insert(pivot).second) throw InputError("pivot " + pivot + " is defined twice");
      inst.relations.push_back(rel);
    } else if (starts_with(line, "claim ")) {
      auto [l, r] = equation(line.substr(6));
      inst.claim = {"claim", trim(line.substr(6)), l, r};
    } else if (starts_with(line, "control ")) {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw InputError("expected ':' after control name in '" + line + "'");
      auto [l, r] = equation(line.substr(colon + 1));
      inst.controls.push_back({trim(line.substr(8, colon - 8)), trim(line.substr(colon + 1)), l, r});
    } else {
      throw InputError("unknown statement '" + line + "'");
    }
  }
};

Instance instantiate(const Block& b, const std::string& name, const Env& base) {
  Builder bld;
  bld.inst.name = name;
  bld.env = base;
  for (const auto& [lineno, line] : b.lines) {
    try {
      bld.statement(line);
    } catch (const InputError& e) {
      throw InputError("identities line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (bld.inst.claim.text.empty()) throw InputError("identity " + b.name + " has no claim");
  return bld.inst;
}

}  // namespace

const Identity& Registry::get(const std::string& name) const {
  static const std::map<std::string, std::string> aliases = {
      {"M'", "Mprime"}, {"M\u2032", "Mprime"}, {"S3symmetrisation", "S3"}, {"Smusymmetrisation", "Smu"}};
  auto alias = aliases.find(name);
  auto it = identities.find(alias == aliases.end() ? name : alias->second);
  if (it == identities.end()) throw InputError("unknown identity '" + name + "' (known: " + join(order, ", ") + ")");
  return it->second;
}

Registry parse_identities(std::string_view text) {
  Registry reg;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  std::optional<Block> cur;
  bool format_seen = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (starts_with(line, "format ")) {
      if (line != "format nefcone-identities 1") throw InputError("unsupported identities format: " + line);
      format_seen = true;
      continue;
    }
    if (starts_with(line, "identity ")) {
      if (cur) throw InputError("identities line " + std::to_string(lineno) + ": missing 'end'");
      cur.emplace();
      std::istringstream ls(line.substr(9));
      ls >> cur->name;
      std::string kw;
      if (ls >> kw) {
        std::string var, in_kw, range;
        if (kw != "for" || !(ls >> var >> in_kw >> range) || in_kw != "in")
          throw InputError("identities line " + std::to_string(lineno) + ": expected 'for VAR in LO..HI'");
        auto dots = range.find("..");
        if (dots == std::string::npos) throw InputError("identities line " + std::to_string(lineno) + ": bad range");
        cur->param = var;
        cur->lo = std::stol(range.substr(0, dots));
        cur->hi = std::stol(range.substr(dots + 2));
      }
      continue;
    }
    if (!cur) throw InputError("identities line " + std::to_string(lineno) + ": statement outside an identity");
    if (line == "end") {
      Identity id;
      id.name = cur->name;
      id.text = cur->text;
      if (cur->param.empty()) {
        id.instances.push_back(instantiate(*cur, cur->name, {}));
      } else {
        for (long v = cur->lo; v <= cur->hi; ++v) {
          Env env;
          env.vars[cur->param] = std::to_string(v);
          id.instances.push_back(instantiate(*cur, cur->name + "[" + cur->param + "=" + std::to_string(v) + "]", env));
        }
      }
      if (reg.identities.count(id.name)) throw InputError("identity " + id.name + " is defined twice");
      reg.order.push_back(id.name);
      reg.identities[id.name] = std::move(id);
      cur.reset();
      continue;
    }
    if (starts_with(line, "text ")) {
      cur->text = trim(line.substr(5));
      continue;
    }
    cur->lines.push_back({lineno, line});
  }
  if (cur) throw InputError("identity " + cur->name + " is missing 'end'");
  if (!format_seen) throw InputError("identities file has no format line");
  return reg;
}

const Registry& registry() {
  static const Registry reg = parse_identities(embedded::identities_text);
  return reg;
}

FormalDivisor normalize(const FormalDivisor& d, const std::vector<Relation>& relations) {
  std::map<std::string, FormalDivisor> rules;
  for (const auto& r : relations) {
    Coeff c = r.combination.coefficient(r.pivot);
    FormalDivisor rest = r.combination;
    rest.add(r.pivot, -c);
    rules[r.pivot] = rest * (Coeff(Rational(-1)) / c);
  }
  std::map<std::string, FormalDivisor> done;
  std::vector<std::string> stack;
  std::function<FormalDivisor(const FormalDivisor&)> reduce;
  std::function<const FormalDivisor&(const std::string&)> expand = [&](const std::string& s) -> const FormalDivisor& {
    auto it = done.find(s);
    if (it != done.end()) return it->second;
    if (std::find(stack.begin(), stack.end(), s) != stack.end()) {
      stack.push_back(s);
      throw ComputationError("substitution cycle detected: " + join(stack, " -> "));
    }
    stack.push_back(s);
    FormalDivisor v = reduce(rules.at(s));
    stack.pop_back();
    return done[s] = v;
  };
  reduce = [&](const FormalDivisor& x) {
    FormalDivisor out;
    for (const auto& [s, c] : x.terms()) {
      if (rules.count(s))
        out = out + expand(s) * c;
      else
        out.add(s, c);
    }
    return out;
  };
  return reduce(d);
}

bool AuditResult::passed() const {
  if (!residual.is_zero()) return false;
  return std::all_of(controls.begin(), controls.end(), [](const ControlResult& c) { return !c.residual.is_zero(); });
}

std::vector<AuditResult> audit_instance_set(const Identity& id) {
  std::vector<AuditResult> out;
  for (const auto& inst : id.instances) {
    AuditResult r;
    r.identity = id.name;
    r.instance = inst.name;
    r.residual = normalize(inst.claim.lhs - inst.claim.rhs, inst.relations);
    for (const auto& c : inst.controls) r.controls.push_back({c.name, normalize(c.lhs - c.rhs, inst.relations)});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AuditResult> audit_identity(const std::string& name, const Registry& reg) {
  return audit_instance_set(reg.get(name));
}

}  // namespace nefcone::ledger
