#include "nefcone/exact_lp.hpp"

namespace nefcone::lp {

namespace {

struct Tableau {
  std::size_t m, n;               // rows, original columns
  RatMatrix t;                    // m rows of (n + m + 1) entries; last is rhs
  std::vector<std::size_t> basis;

  std::size_t width() const { return n + m; }

  void pivot(std::size_t r, std::size_t col) {
    Rational inv = 1 / t[r][col];
    for (auto& x : t[r]) x *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][col] == 0) continue;
      Rational f = t[i][col];
      for (std::size_t j = 0; j <= width(); ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = col;
  }

  // Minimises cost over the columns flagged allowed. Returns false if unbounded.
  bool optimise(const RatVector& cost, const std::vector<bool>& allowed) {
    while (true) {
      RatVector reduced = reduced_costs(cost);
      std::size_t enter = width();
      for (std::size_t j = 0; j < width(); ++j)
        if (allowed[j] && reduced[j] < 0) {
          enter = j;
          break;
        }
      if (enter == width()) return true;
      std::size_t leave = m;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= 0) continue;
        Rational ratio = t[i][width()] / t[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }

  RatVector duals(const RatVector& cost) const {
    // pi = c_B B^{-1}; B^{-1} sits in the artificial columns.
    RatVector pi(m, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
      const Rational& cb = cost[basis[r]];
      if (cb == 0) continue;
      for (std::size_t i = 0; i < m; ++i) pi[i] += cb * t[r][n + i];
    }
    return pi;
  }

  RatVector reduced_costs(const RatVector& cost) const {
    RatVector red = cost;
    for (std::size_t r = 0; r < m; ++r) {
      const Rational& cb = cost[basis[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < width(); ++j) red[j] -= cb * t[r][j];
    }
    return red;
  }
};

}  // namespace

Result solve(const RatMatrix& a, const RatVector& b, const RatVector& c) {
  std::size_t m = a.size();
  std::size_t n = m ? a[0].size() : c.size();
  if (b.size() != m) throw InputError("lp: rhs length mismatch");
  if (!c.empty() && c.size() != n) throw InputError("lp: cost length mismatch");
  Result res;
  if (m == 0) {
    res.x.assign(n, Rational(0));
    bool unbounded = false;
    for (const auto& ci : c)
      if (ci < 0) unbounded = true;
    res.status = unbounded ? Status::Unbounded : Status::Optimal;
    res.value = 0;
    return res;
  }

  Tableau tab{m, n, zeros(m, n + m + 1), std::vector<std::size_t>(m)};
  std::vector<int> flip(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) throw InputError("lp: ragged constraint matrix");
    if (b[i] < 0) flip[i] = -1;
    for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = flip[i] * a[i][j];
    tab.t[i][n + i] = 1;
    tab.t[i][n + m] = flip[i] * b[i];
    tab.basis[i] = n + i;
  }

  RatVector phase1(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  std::vector<bool> all(n + m, true);
  tab.optimise(phase1, all);
  Rational infeas = 0;
  for (std::size_t r = 0; r < m; ++r)
    if (tab.basis[r] >= n) infeas += tab.t[r][n + m];
  if (infeas > 0) {
    RatVector pi = tab.duals(phase1);
    res.status = Status::Infeasible;
    res.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) res.farkas[i] = -pi[i] * flip[i];
    return res;
  }

  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (tab.t[r][j] != 0) {
        tab.pivot(r, j);
        break;
      }
  }

  std::vector<bool> original(n + m, false);
  for (std::size_t j = 0; j < n; ++j) original[j] = true;
  RatVector cost(n + m, Rational(0));
  for (std::size_t j = 0; j < c.size(); ++j) cost[j] = c[j];
  if (!c.empty() && !tab.optimise(cost, original)) {
    res.status = Status::Unbounded;
    return res;
  }
  res.status = Status::Optimal;
  res.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r)
    if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.t[r][n + m];
  res.value = 0;
  for (std::size_t j = 0; j < c.size(); ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace nefcone::lp
