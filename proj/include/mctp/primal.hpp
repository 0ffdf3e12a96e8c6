#pragma once

// Exact timing of a fixed route for the coverage-constrained problem: arc
// times within speed bounds, idling at any interior node of the route,
// coverage requirements as hard constraints, Σt + Σy ≤ T.

#include <vector>

#include "mctp/dense_lp.hpp"
#include "mctp/index_table.hpp"
#include "mctp/instance.hpp"
#include "mctp/solution.hpp"

namespace mctp {

struct PrimalPathResult {
  bool feasible = false;
  double objective = 0.0;
  PathSolution solution;
};

inline PrimalPathResult solve_path_primal(const Instance& inst, const ArcIndexTable& table,
                                          const std::vector<int>& nodes, const LpOptions& lp_opts = {}) {
  const int W = inst.target_count();
  const int arcs = static_cast<int>(nodes.size()) - 1;
  std::vector<int> idle_nodes;
  for (int k = 1; k < arcs; ++k) {
    bool useful = false;
    for (int w = 0; w < W; ++w) useful = useful || table.node_coverage(nodes[k], w) > 0.0;
    if (useful) idle_nodes.push_back(nodes[k]);
  }
  const int nv = arcs + static_cast<int>(idle_nodes.size());

  // Coverage of each target as a linear function of the variables.
  std::vector<std::vector<double>> cov(W, std::vector<double>(nv, 0.0));
  for (int w = 0; w < W; ++w) {
    for (int k = 0; k < arcs; ++k) cov[w][k] = table.coverage_rate(nodes[k], nodes[k + 1], w);
    for (std::size_t q = 0; q < idle_nodes.size(); ++q) cov[w][arcs + q] = table.node_coverage(idle_nodes[q], w);
  }

  LinearProgram lp;
  lp.objective.assign(nv, 0.0);
  lp.lower.assign(nv, 0.0);
  lp.upper.assign(nv, std::numeric_limits<double>::infinity());
  for (int k = 0; k < arcs; ++k) {
    lp.lower[k] = inst.min_time(nodes[k], nodes[k + 1]);
    lp.upper[k] = inst.max_time(nodes[k], nodes[k + 1]);
  }
  for (int w = 0; w < W; ++w) {
    const double p = inst.targets()[w].priority;
    for (int v = 0; v < nv; ++v) lp.objective[v] += p * cov[w][v];
    if (inst.targets()[w].required > 0.0) lp.add_row(cov[w], Relation::greater_equal, inst.targets()[w].required);
  }
  lp.add_row(std::vector<double>(nv, 1.0), Relation::less_equal, inst.deadline());

  const LpResult res = dense_lp_solve(lp, lp_opts);
  PrimalPathResult out;
  if (res.status != LpStatus::optimal) return out;
  out.feasible = true;
  auto& sol = out.solution;
  sol.nodes = nodes;
  sol.arc_times.assign(res.x.begin(), res.x.begin() + arcs);
  for (std::size_t q = 0; q < idle_nodes.size(); ++q)
    if (res.x[arcs + q] > 0.0) sol.idle.push_back({idle_nodes[q], res.x[arcs + q]});
  evaluate(inst, table, sol);
  sol.objective = route_objective(inst, sol.per_target_coverage);
  out.objective = sol.objective;
  return out;
}

/// Greedy repair of a relaxation route: while some target gets no coverage
/// at all from the route, insert the waypoint that covers it best at its
/// cheapest position, then time the route exactly.
inline PrimalPathResult repair_route(const Instance& inst, const ArcIndexTable& table, std::vector<int> nodes) {
  const int W = inst.target_count();
  for (int round = 0; round <= inst.waypoint_count(); ++round) {
    auto res = solve_path_primal(inst, table, nodes);
    if (res.feasible) return res;

    NodeSet on_path;
    for (int v : nodes) on_path = on_path.with(v);
    int orphan = -1;
    for (int w = 0; w < W && orphan < 0; ++w) {
      if (inst.targets()[w].required <= 0.0) continue;
      bool reached = false;
      for (std::size_t k = 0; k + 1 < nodes.size() && !reached; ++k)
        reached = table.coverage_rate(nodes[k], nodes[k + 1], w) > 0.0 ||
                  (inst.is_interior(nodes[k]) && table.node_coverage(nodes[k], w) > 0.0);
      if (!reached) orphan = w;
    }
    if (orphan < 0) return res;

    int best_node = -1;
    for (int i = 1; i < inst.exit(); ++i)
      if (!on_path.contains(i) && table.node_coverage(i, orphan) > 0.0 &&
          (best_node < 0 || table.node_coverage(i, orphan) > table.node_coverage(best_node, orphan)))
        best_node = i;
    if (best_node < 0) return res;

    std::size_t best_pos = 1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      const double cost = inst.distance(nodes[k], best_node) + inst.distance(best_node, nodes[k + 1]) -
                          inst.distance(nodes[k], nodes[k + 1]);
      if (cost < best_cost) {
        best_cost = cost;
        best_pos = k + 1;
      }
    }
    nodes.insert(nodes.begin() + static_cast<long>(best_pos), best_node);
  }
  return {};
}

}  // namespace mctp
