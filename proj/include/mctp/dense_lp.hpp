#pragma once

// Small dense two-phase simplex. Problems are stated as
//
//   maximize c'x  subject to  a_i'x (<=, >=, =) b_i,  lower <= x <= upper
//
// with finite lower bounds and possibly infinite upper bounds. Infeasible
// problems come back with a Farkas certificate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mctp {

enum class Relation { less_equal, greater_equal, equal };

struct LinearProgram {
  std::vector<double> objective;  // maximize
  std::vector<std::vector<double>> rows;
  std::vector<Relation> relations;
  std::vector<double> rhs;
  std::vector<double> lower;  // empty -> all zero
  std::vector<double> upper;  // empty -> all +inf

  int variables() const { return static_cast<int>(objective.size()); }

  void add_row(std::vector<double> coefficients, Relation rel, double b) {
    rows.push_back(std::move(coefficients));
    relations.push_back(rel);
    rhs.push_back(b);
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

/// Proof that no x satisfies the constraints: with g = Σ y_i a_i + z,
/// g >= 0 and g'lower > y'b + z'upper, where y_i >= 0 on <= rows, y_i <= 0
/// on >= rows, z >= 0 (zero where the upper bound is infinite).
struct FarkasCertificate {
  std::vector<double> row_multipliers;    // y
  std::vector<double> upper_multipliers;  // z
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  FarkasCertificate certificate;  // filled when infeasible
  int iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-9;
  int max_iterations = 5000;
  int degenerate_streak_for_bland = 50;
};

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Tableau over rows  [A | I_art] z = b,  z >= 0, b >= 0. The last row holds
// reduced costs d_j = y'A_j - c_j; the last column holds the rhs.
class SimplexTableau {
 public:
  SimplexTableau(int rows, int cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, -1) {}

  double& at(int r, int c) { return t_[r * (n_ + 1) + c]; }
  double at(int r, int c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  double& cost(int c) { return at(m_, c); }
  double value() const { return at(m_, n_); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int j = 0; j <= n_; ++j) at(r, j) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Set reduced costs for objective `c` (maximize) given the current basis.
  void price(const std::vector<double>& c) {
    for (int j = 0; j <= n_; ++j) cost(j) = (j < n_) ? -c[j] : 0.0;
    for (int r = 0; r < m_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= n_; ++j) cost(j) += cb * at(r, j);
    }
  }

  // Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed, const LpOptions& opt, int& iterations) {
    int degenerate = 0;
    for (;;) {
      if (iterations >= opt.max_iterations)
        throw LpError("simplex: cycling guard exceeded after " + std::to_string(iterations) + " pivots");
      const bool bland = degenerate >= opt.degenerate_streak_for_bland;
      int enter = -1;
      double best = -opt.tolerance;
      for (int j = 0; j < n_; ++j) {
        if (!allowed[j]) continue;
        const double d = at(m_, j);
        if (d < best) {
          enter = j;
          best = d;
          if (bland) break;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= opt.tolerance) continue;
        const double q = at(r, n_) / a;
        if (q < ratio - opt.tolerance ||
            (q <= ratio + opt.tolerance && leave >= 0 && basis_[r] < basis_[leave])) {
          ratio = std::min(q, ratio);
          leave = r;
        }
      }
      if (leave < 0) return false;
      degenerate = (ratio <= opt.tolerance) ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  int m_, n_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

}  // namespace detail

inline LpResult dense_lp_solve(const LinearProgram& lp, const LpOptions& opt = {}) {
  const int nv = lp.variables();
  const int nrows = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.relations.size()) != nrows || static_cast<int>(lp.rhs.size()) != nrows)
    throw std::invalid_argument("dense_lp_solve: row/relation/rhs size mismatch");
  for (const auto& r : lp.rows)
    if (static_cast<int>(r.size()) != nv) throw std::invalid_argument("dense_lp_solve: row width mismatch");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lo = lp.lower.empty() ? std::vector<double>(nv, 0.0) : lp.lower;
  std::vector<double> up = lp.upper.empty() ? std::vector<double>(nv, inf) : lp.upper;
  for (int j = 0; j < nv; ++j)
    if (!std::isfinite(lo[j])) throw std::invalid_argument("dense_lp_solve: lower bounds must be finite");

  // Expand everything into G x <= h.
  struct Expanded {
    std::vector<double> g;
    double h;
    int source;   // original row, or -1 - var for an upper-bound row
    double sign;  // multiplier mapping back to the source
  };
  std::vector<Expanded> ex;
  for (int i = 0; i < nrows; ++i) {
    const auto& a = lp.rows[i];
    std::vector<double> neg(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) neg[j] = -a[j];
    switch (lp.relations[i]) {
      case Relation::less_equal: ex.push_back({a, lp.rhs[i], i, 1.0}); break;
      case Relation::greater_equal: ex.push_back({neg, -lp.rhs[i], i, -1.0}); break;
      case Relation::equal:
        ex.push_back({a, lp.rhs[i], i, 1.0});
        ex.push_back({neg, -lp.rhs[i], i, -1.0});
        break;
    }
  }
  for (int j = 0; j < nv; ++j) {
    if (!std::isfinite(up[j])) continue;
    std::vector<double> e(nv, 0.0);
    e[j] = 1.0;
    ex.push_back({std::move(e), up[j], -1 - j, 1.0});
  }

  // Shift x = lo + x', x' >= 0.
  const int m = static_cast<int>(ex.size());
  std::vector<double> hshift(m);
  for (int r = 0; r < m; ++r) {
    double s = ex[r].h;
    for (int j = 0; j < nv; ++j) s -= ex[r].g[j] * lo[j];
    hshift[r] = s;
  }

  // Columns: x' (nv), slacks (m), artificials (m).
  const int ncols = nv + 2 * m;
  detail::SimplexTableau tab(m, ncols);
  std::vector<bool> flipped(m, false);
  for (int r = 0; r < m; ++r) {
    flipped[r] = hshift[r] < 0.0;
    const double s = flipped[r] ? -1.0 : 1.0;
    for (int j = 0; j < nv; ++j) tab.at(r, j) = s * ex[r].g[j];
    tab.at(r, nv + r) = s;
    tab.at(r, nv + m + r) = 1.0;
    tab.rhs(r) = s * hshift[r];
    tab.basis()[r] = flipped[r] ? nv + m + r : nv + r;
  }

  LpResult result;
  int iterations = 0;

  // Phase 1: maximize -Σ artificials (only rows that start on one).
  std::vector<double> c1(ncols, 0.0);
  for (int r = 0; r < m; ++r)
    if (flipped[r]) c1[nv + m + r] = -1.0;
  std::vector<bool> allowed(ncols, true);
  for (int r = 0; r < m; ++r)
    if (!flipped[r]) allowed[nv + m + r] = false;
  tab.price(c1);
  tab.optimize(allowed, opt, iterations);

  double scale = 1.0;
  for (int r = 0; r < m; ++r) scale = std::max(scale, std::abs(hshift[r]));
  if (tab.value() < -opt.tolerance * scale) {
    // y_i = d_{e_i} + c_{e_i} for the initial basis column of each row.
    std::vector<double> yhat(m);
    for (int r = 0; r < m; ++r) {
      const double y = flipped[r] ? tab.at(m, nv + m + r) - 1.0 : tab.at(m, nv + r);
      yhat[r] = flipped[r] ? -y : y;
    }
    result.status = LpStatus::infeasible;
    result.certificate.row_multipliers.assign(nrows, 0.0);
    result.certificate.upper_multipliers.assign(nv, 0.0);
    for (int r = 0; r < m; ++r) {
      const double v = std::max(yhat[r], 0.0);
      if (ex[r].source >= 0)
        result.certificate.row_multipliers[ex[r].source] += ex[r].sign * v;
      else
        result.certificate.upper_multipliers[-1 - ex[r].source] += v;
    }
    result.iterations = iterations;
    return result;
  }

  // Drive remaining artificials out of the basis.
  for (int r = 0; r < m; ++r) {
    if (tab.basis()[r] < nv + m) continue;
    int col = -1;
    for (int j = 0; j < nv + m; ++j)
      if (std::abs(tab.at(r, j)) > opt.tolerance) {
        col = j;
        break;
      }
    if (col >= 0) tab.pivot(r, col);
  }

  // Phase 2.
  std::vector<double> c2(ncols, 0.0);
  for (int j = 0; j < nv; ++j) c2[j] = lp.objective[j];
  for (int j = nv + m; j < ncols; ++j) allowed[j] = false;
  tab.price(c2);
  const bool bounded = tab.optimize(allowed, opt, iterations);
  result.iterations = iterations;
  if (!bounded) {
    result.status = LpStatus::unbounded;
    return result;
  }

  std::vector<double> xs(ncols, 0.0);
  for (int r = 0; r < m; ++r) xs[tab.basis()[r]] = tab.at(r, ncols);
  result.status = LpStatus::optimal;
  result.x.resize(nv);
  double obj = 0.0;
  for (int j = 0; j < nv; ++j) {
    result.x[j] = std::clamp(lo[j] + xs[j], lo[j], up[j]);
    obj += lp.objective[j] * result.x[j];
  }
  result.objective = obj;
  return result;
}

}  // namespace mctp
