#pragma once

// A complete single-vehicle route with its timing, plus the constraint
// checker used on every route the solvers emit.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "mctp/index_table.hpp"
#include "mctp/instance.hpp"

namespace mctp {

struct IdleTime {
  int node = 0;
  double time = 0.0;

  friend bool operator==(const IdleTime&, const IdleTime&) = default;
};

struct PathSolution {
  std::vector<int> nodes;          // 0, ..., n+1
  std::vector<double> arc_times;   // one per consecutive node pair
  std::vector<IdleTime> idle;      // nonzero idle times, in path order
  double objective = 0.0;          // as claimed by whoever built it

  // Derived by evaluate(); not part of the identity of a route.
  std::vector<double> per_target_coverage;
  std::vector<double> speeds;
  std::vector<double> arrivals;

  int arc_count() const { return static_cast<int>(arc_times.size()); }

  double idle_at(int node) const {
    double y = 0.0;
    for (const auto& it : idle)
      if (it.node == node) y += it.time;
    return y;
  }

  double total_idle() const {
    double y = 0.0;
    for (const auto& it : idle) y += it.time;
    return y;
  }

  double total_time() const {
    double s = total_idle();
    for (double t : arc_times) s += t;
    return s;
  }
};

/// Per-target coverage Σ c_ijw d̄/d t_ij + Σ c_iw y_i of a route.
inline std::vector<double> route_coverage(const ArcIndexTable& table, const PathSolution& sol) {
  std::vector<double> cov(table.targets(), 0.0);
  for (int k = 0; k + 1 < static_cast<int>(sol.nodes.size()) && k < sol.arc_count(); ++k)
    for (int w = 0; w < table.targets(); ++w)
      cov[w] += table.coverage_rate(sol.nodes[k], sol.nodes[k + 1], w) * sol.arc_times[k];
  for (const auto& it : sol.idle)
    for (int w = 0; w < table.targets(); ++w) cov[w] += table.node_coverage(it.node, w) * it.time;
  return cov;
}

inline double route_objective(const Instance& inst, const std::vector<double>& coverage) {
  double obj = 0.0;
  for (int w = 0; w < inst.target_count(); ++w) obj += inst.targets()[w].priority * coverage[w];
  return obj;
}

/// Fills coverage, speeds and arrival times. Does not touch `objective`.
inline void evaluate(const Instance& inst, const ArcIndexTable& table, PathSolution& sol) {
  sol.per_target_coverage = route_coverage(table, sol);
  sol.speeds.clear();
  sol.arrivals.clear();
  double s = 0.0;
  for (std::size_t k = 0; k < sol.nodes.size(); ++k) {
    sol.arrivals.push_back(s);
    if (k < sol.arc_times.size()) {
      const int i = sol.nodes[k], j = sol.nodes[k + 1];
      const double t = sol.arc_times[k];
      sol.speeds.push_back(t > 0.0 ? inst.distance(i, j) / t : 0.0);
      s += sol.idle_at(i) + t;
    }
  }
}

struct ValidateOptions {
  bool enforce_coverage = false;
  bool single_idle = false;
  bool check_energy = false;
  bool check_time_windows = false;
  double tolerance = 1e-9;
};

struct ConstraintCheck {
  std::string name;
  bool pass = true;
  double slack = 0.0;
};

struct TargetCoverage {
  int id = 0;
  double coverage = 0.0;
  double required = 0.0;
};

struct ValidationReport {
  std::vector<ConstraintCheck> constraints;
  std::vector<std::string> structural_errors;
  std::vector<TargetCoverage> per_target;
  double objective = 0.0;  // recomputed

  bool ok() const {
    if (!structural_errors.empty()) return false;
    return std::all_of(constraints.begin(), constraints.end(), [](const auto& c) { return c.pass; });
  }

  const ConstraintCheck* find(const std::string& name) const {
    for (const auto& c : constraints)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline std::vector<std::string> structure_errors(const Instance& inst, const PathSolution& sol) {
  std::vector<std::string> errs;
  const auto& p = sol.nodes;
  if (p.size() < 3) errs.push_back("path must contain at least one waypoint");
  if (!p.empty() && p.front() != inst.entry()) errs.push_back("path must start at node 0");
  if (!p.empty() && p.back() != inst.exit()) errs.push_back("path must end at node n+1");
  if (p.size() >= 1 && sol.arc_times.size() != p.size() - 1)
    errs.push_back("arc_times must have one entry per arc");
  NodeSet seen;
  for (int v : p) {
    if (v < 0 || v >= inst.node_count()) {
      errs.push_back("unknown node " + std::to_string(v));
      return errs;
    }
    if (seen.contains(v)) errs.push_back("node " + std::to_string(v) + " visited twice");
    seen = seen.with(v);
  }
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
    if (!inst.is_path_arc(p[k], p[k + 1]))
      errs.push_back("(" + std::to_string(p[k]) + "," + std::to_string(p[k + 1]) + ") is not an arc");
  for (const auto& it : sol.idle)
    if (!seen.contains(it.node) || !inst.is_interior(it.node))
      errs.push_back("idle at node " + std::to_string(it.node) + " which is not an interior node of the path");
  return errs;
}

}  // namespace detail

inline ValidationReport validate_solution(const Instance& inst, const ArcIndexTable& table,
                                          const PathSolution& sol, const ValidateOptions& opts = {}) {
  ValidationReport rep;
  rep.structural_errors = detail::structure_errors(inst, sol);
  if (!rep.structural_errors.empty()) return rep;

  const double T = inst.deadline();
  const double tol = opts.tolerance;
  auto add = [&](std::string name, double slack, double scale) {
    rep.constraints.push_back({std::move(name), slack >= -tol * std::max(1.0, scale), slack});
  };

  double speed_slack = std::numeric_limits<double>::infinity();
  double time_scale = 1.0;
  for (int k = 0; k < sol.arc_count(); ++k) {
    const int i = sol.nodes[k], j = sol.nodes[k + 1];
    const double t = sol.arc_times[k];
    speed_slack = std::min({speed_slack, t - inst.min_time(i, j), inst.max_time(i, j) - t});
    time_scale = std::max(time_scale, inst.max_time(i, j));
  }
  add("speed_bounds", speed_slack, time_scale);

  double min_idle = 0.0;
  for (const auto& it : sol.idle) min_idle = std::min(min_idle, it.time);
  add("idle_nonnegative", min_idle, 1.0);

  add("deadline", T - sol.total_time(), T);

  if (opts.single_idle) {
    int positive = 0;
    for (const auto& it : sol.idle) positive += it.time > tol;
    add("single_idle", positive <= 1 ? 0.0 : -static_cast<double>(positive - 1), 1.0);
  }

  const auto cov = route_coverage(table, sol);
  for (int w = 0; w < inst.target_count(); ++w) {
    const auto& t = inst.targets()[w];
    rep.per_target.push_back({t.id, cov[w], t.required});
    if (opts.enforce_coverage)
      add("coverage[w=" + std::to_string(t.id) + "]", cov[w] - t.required, t.required);
  }

  if (opts.check_energy) {
    double e = 0.0;
    for (int k = 0; k < sol.arc_count(); ++k) {
      const double d = inst.distance(sol.nodes[k], sol.nodes[k + 1]);
      const double t = sol.arc_times[k];
      e += t > 0.0 ? arc_energy(d, d / t, inst.physics().beta, inst.physics().gamma)
                   : std::numeric_limits<double>::infinity();
    }
    add("energy", inst.vehicle().energy_max - e, inst.vehicle().energy_max);
  }

  if (opts.check_time_windows) {
    double worst = std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t k = 0; k < sol.nodes.size(); ++k) {
      const auto& wp = inst.waypoints()[sol.nodes[k]];
      const double y = sol.idle_at(wp.id);
      worst = std::min({worst, s - wp.open, wp.close - (s + y)});
      if (k < sol.arc_times.size()) s += y + sol.arc_times[k];
    }
    add("time_windows", worst, T);
  }

  rep.objective = route_objective(inst, cov);
  const double mismatch = std::abs(rep.objective - sol.objective);
  rep.constraints.push_back(
      {"objective", mismatch <= 1e-8 * std::max(1.0, std::abs(rep.objective)), -mismatch});
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const PathSolution& sol) {
  nlohmann::json j;
  j["nodes"] = sol.nodes;
  j["arc_times"] = sol.arc_times;
  auto idle = nlohmann::json::array();
  for (const auto& it : sol.idle) idle.push_back({{"node", it.node}, {"time", it.time}});
  j["idle"] = idle;
  j["objective"] = sol.objective;
  if (!sol.per_target_coverage.empty()) j["per_target_coverage"] = sol.per_target_coverage;
  if (!sol.speeds.empty()) j["speeds"] = sol.speeds;
  if (!sol.arrivals.empty()) j["arrivals"] = sol.arrivals;
  return j;
}

inline PathSolution solution_from_json(const nlohmann::json& j) {
  try {
    PathSolution sol;
    sol.nodes = j.at("nodes").get<std::vector<int>>();
    sol.arc_times = j.at("arc_times").get<std::vector<double>>();
    if (j.contains("idle"))
      for (const auto& it : j.at("idle")) sol.idle.push_back({it.at("node").get<int>(), it.at("time").get<double>()});
    sol.objective = j.at("objective").get<double>();
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("schema: solution: ") + e.what());
  }
}

inline nlohmann::json to_json(const ValidationReport& rep) {
  nlohmann::json j;
  j["pass"] = rep.ok();
  auto cons = nlohmann::json::array();
  for (const auto& c : rep.constraints) cons.push_back({{"name", c.name}, {"pass", c.pass}, {"slack", c.slack}});
  j["constraints"] = cons;
  j["structural_errors"] = rep.structural_errors;
  j["objective"] = rep.objective;
  auto pt = nlohmann::json::array();
  for (const auto& t : rep.per_target)
    pt.push_back({{"id", t.id}, {"coverage", t.coverage}, {"required", t.required}});
  j["per_target"] = pt;
  return j;
}

}  // namespace mctp
