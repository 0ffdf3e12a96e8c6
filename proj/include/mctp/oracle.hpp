#pragma once

// Brute force over every simple 0 -> n+1 path. Used to certify the labeling
// solvers and the dual bound on small instances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mctp/index_table.hpp"
#include "mctp/instance.hpp"
#include "mctp/primal.hpp"
#include "mctp/relaxation.hpp"

namespace mctp {

struct EnumerationBudget {
  int max_waypoints = 8;
  long max_paths = 20'000'000;
  double wall_seconds = 600.0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Σ_{k=1..n} k! C(n, k): simple paths through at least one waypoint.
inline long analytic_path_count(int n) {
  long total = 0;
  long falling = 1;  // n (n-1) ... (n-k+1)
  for (int k = 1; k <= n; ++k) {
    falling *= (n - k + 1);
    total += falling;
  }
  return total;
}

/// Calls visit(nodes) for every simple 0 -> n+1 path in lexicographic
/// order of the node sequence.
template <class Visit>
long enumerate_paths(const Instance& inst, const EnumerationBudget& budget, Visit&& visit) {
  const int n = inst.waypoint_count();
  if (n > budget.max_waypoints)
    throw BudgetExceeded("enumeration refused: " + std::to_string(n) + " waypoints exceeds budget of " +
                         std::to_string(budget.max_waypoints));
  if (analytic_path_count(n) > budget.max_paths)
    throw BudgetExceeded("enumeration refused: path count exceeds budget");
  const auto stop = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget.wall_seconds));
  const int exit = inst.exit();
  std::vector<int> path{0};
  NodeSet seen = NodeSet{}.with(0);
  long count = 0;
  auto dfs = [&](auto&& self) -> void {
    for (int j = 1; j < exit; ++j) {
      if (seen.contains(j)) continue;
      path.push_back(j);
      seen = seen.with(j);
      self(self);
      seen.bits &= ~(std::uint64_t{1} << j);
      path.pop_back();
    }
    if (path.size() > 1) {
      path.push_back(exit);
      if ((++count & 4095) == 0 && std::chrono::steady_clock::now() > stop)
        throw BudgetExceeded("enumeration exceeded its wall-clock budget");
      visit(static_cast<const std::vector<int>&>(path));
      path.pop_back();
    }
  };
  dfs(dfs);
  return count;
}

struct OracleWitness {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
  int vbar = 0;
  std::vector<int> nodes;
  std::vector<double> times;
  long paths = 0;
};

namespace detail {

struct OracleArc {
  double f, lo, hi;
  int id;
};

// Greedy continuous knapsack: all arcs at min time, then the budget goes to
// positive slopes in decreasing order (ties by arc id).
inline bool knapsack_times(const std::vector<OracleArc>& arcs, double budget, std::vector<double>& t) {
  t.resize(arcs.size());
  double used = 0.0;
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    t[k] = arcs[k].lo;
    used += arcs[k].lo;
  }
  if (used > budget) return false;
  std::vector<std::size_t> order(arcs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (arcs[a].f != arcs[b].f) return arcs[a].f > arcs[b].f;
    return arcs[a].id < arcs[b].id;
  });
  double slack = budget - used;
  for (std::size_t k : order) {
    if (!(arcs[k].f > 0.0) || slack <= 0.0) break;
    const double d = std::min(slack, arcs[k].hi - arcs[k].lo);
    t[k] += d;
    slack -= d;
  }
  return true;
}

}  // namespace detail

/// f(λ) by definition. Every coefficient is recomputed here from the index
/// table rather than taken from the relaxation module.
inline OracleWitness oracle_relaxation(const Instance& inst, const ArcIndexTable& table, const Multipliers& lambda,
                                       SpecialCase kind, const EnumerationBudget& budget = {}) {
  const int W = inst.target_count();
  const int N = inst.node_count();
  std::vector<double> weight(W);
  double constant = 0.0;
  for (int w = 0; w < W; ++w) {
    weight[w] = inst.targets()[w].priority - lambda[w];
    constant += inst.targets()[w].required * lambda[w];
  }
  std::vector<double> gain(N, 0.0);
  std::vector<int> candidates{0};
  for (int i = 1; i < inst.exit(); ++i) {
    for (int w = 0; w < W; ++w) gain[i] += weight[w] * table.node_coverage(i, w);
    if (gain[i] > 0.0) candidates.push_back(i);
  }
  const double T = inst.deadline();

  OracleWitness best;
  std::vector<detail::OracleArc> arcs;
  std::vector<double> t;
  best.paths = enumerate_paths(inst, budget, [&](const std::vector<int>& p) {
    for (int v : candidates) {
      if (v != 0 && std::find(p.begin(), p.end(), v) == p.end()) continue;
      arcs.clear();
      for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        const int i = p[k], j = p[k + 1];
        double f = 0.0;
        for (int w = 0; w < W; ++w)
          f += weight[w] * (table.coverage_rate(i, j, w) - (v != 0 ? table.node_coverage(v, w) : 0.0));
        arcs.push_back({f, inst.min_time(i, j), inst.max_time(i, j), i * N + j});
      }
      if (kind == SpecialCase::one) {
        t.resize(arcs.size());
        for (std::size_t k = 0; k < arcs.size(); ++k) t[k] = arcs[k].f > 0.0 ? arcs[k].hi : arcs[k].lo;
      } else if (!detail::knapsack_times(arcs, T, t)) {
        continue;
      }
      double value = v != 0 ? gain[v] * T : 0.0;
      for (std::size_t k = 0; k < arcs.size(); ++k) value += arcs[k].f * t[k];
      if (!best.feasible || value > best.value) {
        best.feasible = true;
        best.value = value;
        best.vbar = v;
        best.nodes = p;
        best.times = t;
      }
    }
  });
  if (best.feasible) best.value += constant;
  return best;
}

struct OraclePrimal {
  bool feasible = false;
  double objective = -std::numeric_limits<double>::infinity();
  PathSolution solution;
  long paths = 0;
};

/// Optimum of the coverage-constrained single-vehicle problem: the exact
/// timing LP on every path.
inline OraclePrimal oracle_primal(const Instance& inst, const ArcIndexTable& table,
                                  const EnumerationBudget& budget = {}) {
  OraclePrimal best;
  best.paths = enumerate_paths(inst, budget, [&](const std::vector<int>& p) {
    auto r = solve_path_primal(inst, table, p);
    if (!r.feasible) return;
    if (!best.feasible || r.objective > best.objective) {
      best.feasible = true;
      best.objective = r.objective;
      best.solution = std::move(r.solution);
    }
  });
  return best;
}

}  // namespace mctp
