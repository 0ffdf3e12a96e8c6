#pragma once

// Level-set projection: min ||λ − λ̂||² over {λ ≤ 0 : every cut ≤ f_lev}.
// Feasibility is screened with an LP first; the projection itself is a dual
// active-set method on the (small) multiplier space.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mctp/dense_lp.hpp"
#include "mctp/relaxation.hpp"

namespace mctp {

class MasterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MasterStatus { feasible, infeasible };

inline const char* to_string(MasterStatus s) { return s == MasterStatus::feasible ? "feasible" : "infeasible"; }

struct MasterResult {
  MasterStatus status = MasterStatus::infeasible;
  Multipliers lambda;
  std::vector<int> active;          // constraint ids: cuts 0..L-1, then bound w as L+w
  std::vector<double> multipliers;  // one per entry of `active`
  double kkt_residual = 0.0;
  int iterations = 0;
};

namespace detail {

// Constraints a_k' x <= b_k: cuts (slope' λ <= f_lev − intercept) then λ_w <= 0.
struct LevelSet {
  std::vector<Eigen::VectorXd> a;
  std::vector<double> b;

  LevelSet(const std::vector<CutCoeffs>& cuts, double f_lev, int dim) {
    for (const auto& c : cuts) {
      a.push_back(Eigen::Map<const Eigen::VectorXd>(c.slope.data(), dim));
      b.push_back(f_lev - c.intercept);
    }
    for (int w = 0; w < dim; ++w) {
      a.push_back(Eigen::VectorXd::Unit(dim, w));
      b.push_back(0.0);
    }
  }

  int size() const { return static_cast<int>(a.size()); }
  double scale(int k) const { return std::max({1.0, a[k].lpNorm<Eigen::Infinity>(), std::abs(b[k])}); }
  double violation(int k, const Eigen::VectorXd& x) const { return a[k].dot(x) - b[k]; }
};

inline Eigen::MatrixXd rows_of(const LevelSet& ls, const std::vector<int>& ws, int dim) {
  Eigen::MatrixXd C(ws.size(), dim);
  for (std::size_t r = 0; r < ws.size(); ++r) C.row(r) = ls.a[ws[r]].transpose();
  return C;
}

}  // namespace detail

struct MasterOptions {
  double tolerance = 1e-9;
  int max_iterations = 1000;
};

inline MasterResult solve_master(const std::vector<CutCoeffs>& cuts, const Multipliers& center,
                                 double f_lev, const MasterOptions& opts = {}) {
  if (cuts.empty()) throw std::invalid_argument("solve_master: cut pool is empty");
  const int dim = static_cast<int>(center.size());
  detail::LevelSet ls(cuts, f_lev, dim);
  MasterResult out;

  // Phase 1 over μ = −λ ≥ 0:  −slope' μ <= f_lev − intercept.
  LinearProgram lp;
  lp.objective.assign(dim, 0.0);
  for (const auto& c : cuts) {
    std::vector<double> row(dim);
    for (int w = 0; w < dim; ++w) row[w] = -c.slope[w];
    lp.add_row(std::move(row), Relation::less_equal, f_lev - c.intercept);
  }
  const LpResult feas = dense_lp_solve(lp);
  if (feas.status == LpStatus::infeasible) return out;
  if (feas.status != LpStatus::optimal) throw MasterError("master phase 1 returned " + std::string(to_string(feas.status)));

  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(center.data(), dim);
  // Dual active set (Goldfarb-Idnani with identity Hessian): start at the
  // unconstrained minimiser and add the most violated constraint, dropping
  // working constraints whose multipliers would turn negative.
  Eigen::VectorXd x = target;
  std::vector<int> ws;
  std::vector<double> u;
  int it = 0;
  for (;;) {
    int add = -1;
    double worst = 0.0;
    for (int k = 0; k < ls.size(); ++k) {
      if (std::find(ws.begin(), ws.end(), k) != ws.end()) continue;
      const double v = ls.violation(k, x) / ls.scale(k);
      if (v > opts.tolerance && v > worst) {
        worst = v;
        add = k;
      }
    }
    if (add < 0) break;

    double u_add = 0.0;
    for (;;) {
      if (++it > opts.max_iterations)
        throw MasterError("master active-set iteration limit (" + std::to_string(opts.max_iterations) +
                          ") reached with " + std::to_string(ws.size()) + " working constraints");
      const Eigen::VectorXd& a = ls.a[add];
      Eigen::VectorXd z = a;
      Eigen::VectorXd r = Eigen::VectorXd::Zero(ws.size());
      if (!ws.empty()) {
        const Eigen::MatrixXd N = detail::rows_of(ls, ws, dim).transpose();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(N.transpose() * N);
        if (ldlt.info() != Eigen::Success)
          throw MasterError("master working-set Gram matrix factorisation failed (size " +
                            std::to_string(ws.size()) + ")");
        r = ldlt.solve(N.transpose() * a);
        z = a - N * r;
      }

      double t_dual = std::numeric_limits<double>::infinity();
      int drop = -1;
      for (int j = 0; j < r.size(); ++j)
        if (r[j] > 1e-12 && u[j] / r[j] < t_dual) {
          t_dual = u[j] / r[j];
          drop = j;
        }
      const double zz = z.squaredNorm();
      const bool independent = zz > 1e-20 * std::max(1.0, a.squaredNorm());
      const double t_primal = independent ? std::max(0.0, ls.violation(add, x)) / zz
                                          : std::numeric_limits<double>::infinity();
      const double t = std::min(t_dual, t_primal);
      if (!std::isfinite(t)) return out;  // constraints cannot all hold: empty level set

      if (independent) x -= t * z;
      for (int j = 0; j < r.size(); ++j) u[j] -= t * r[j];
      u_add += t;
      if (t == t_primal) {
        ws.push_back(add);
        u.push_back(u_add);
        break;
      }
      ws.erase(ws.begin() + drop);
      u.erase(u.begin() + drop);
    }
  }
  out.iterations = it;
  Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));

  out.status = MasterStatus::feasible;
  out.lambda.assign(x.data(), x.data() + dim);
  for (double& l : out.lambda) l = std::min(l, 0.0);
  out.active = ws;
  out.multipliers.assign(mu.data(), mu.data() + mu.size());

  // KKT residual: stationarity, primal feasibility, dual sign.
  Eigen::VectorXd stat = x - target;
  for (std::size_t r = 0; r < ws.size(); ++r) stat += mu[r] * ls.a[ws[r]];
  double res = stat.lpNorm<Eigen::Infinity>();
  for (int k = 0; k < ls.size(); ++k) res = std::max(res, ls.violation(k, x) / ls.scale(k));
  for (int r = 0; r < mu.size(); ++r) res = std::max(res, -mu[r]);
  out.kkt_residual = res;
  return out;
}

}  // namespace mctp
