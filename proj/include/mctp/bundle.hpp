#pragma once

// Level bundle method for min_{λ ≤ 0} f(λ).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mctp/lagrangian.hpp"
#include "mctp/master.hpp"
#include "mctp/primal.hpp"

namespace mctp {

struct DualOptions {
  double phi = 0.5;
  double tol = 1e-4;
  int iter_limit = 200;
  double time_limit = 7200.0;  // seconds
  int threads = 1;
  KeyMode mode = KeyMode::slope;
  bool dominance = true;
};

enum class DualStatus { converged, iteration_limit, time_limit, relaxation_infeasible, primal_infeasible };

inline const char* to_string(DualStatus s) {
  switch (s) {
    case DualStatus::converged: return "converged";
    case DualStatus::iteration_limit: return "iteration_limit";
    case DualStatus::time_limit: return "time_limit";
    case DualStatus::relaxation_infeasible: return "relaxation_infeasible";
    case DualStatus::primal_infeasible: return "primal_infeasible";
  }
  return "?";
}

struct TraceRow {
  int iteration = 0;
  double f = std::numeric_limits<double>::quiet_NaN();  // NaN when the master was infeasible
  double lb = 0.0;
  double ub = 0.0;
  double f_lev = std::numeric_limits<double>::quiet_NaN();
  std::string master;  // "initial", "feasible", "infeasible"
  double wall = 0.0;   // seconds since start
};

/// Sentinel lower bound when no feasible route is known.
inline constexpr double kNoLowerBound = -1e9;

struct DualState {
  Multipliers iterate;
  std::vector<CutCoeffs> cuts;
  double lb = kNoLowerBound;
  double ub = std::numeric_limits<double>::infinity();
  double phi = 0.5;
  Multipliers best_lambda;
  int iterations = 0;
  std::vector<TraceRow> trace;

  double level() const { return phi * lb + (1.0 - phi) * ub; }
};

struct DualResult {
  DualStatus status = DualStatus::converged;
  double initial_bound = std::numeric_limits<double>::quiet_NaN();  // f(0)
  double dual_bound = std::numeric_limits<double>::quiet_NaN();     // final UB
  double lower_bound = kNoLowerBound;
  double initial_lower_bound = kNoLowerBound;
  int iterations = 0;
  Multipliers best_lambda;
  RelaxationResult witness;              // relaxation solution at best_lambda
  std::optional<PathSolution> best_primal;
  DualState state;
  double wall_initial = 0.0;
  double wall_total = 0.0;
};

inline bool bundle_converged(double lb, double ub, double tol) {
  return ub - lb <= tol * std::max(1.0, std::abs(ub));
}

inline DualResult run_dual(const Instance& inst, SpecialCase kind, const DualOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("run_dual: tol must be positive");
  if (!(opts.phi > 0.0 && opts.phi < 1.0)) throw std::invalid_argument("run_dual: phi must lie in (0, 1)");
  const auto start = SteadyClock::now();
  const auto stop = start + std::chrono::duration_cast<SteadyClock::duration>(std::chrono::duration<double>(opts.time_limit));
  auto elapsed = [&] { return std::chrono::duration<double>(SteadyClock::now() - start).count(); };

  const ArcIndexTable table = build_index_table(inst);
  RelaxOptions ropts{opts.threads, opts.dominance, opts.mode, stop};
  const int W = inst.target_count();

  DualResult out;
  DualState& st = out.state;
  st.phi = opts.phi;
  st.iterate.assign(W, 0.0);
  st.best_lambda = st.iterate;

  double best_primal_value = -std::numeric_limits<double>::infinity();
  auto repair = [&](const RelaxationResult& r) -> std::optional<double> {
    auto p = repair_route(inst, table, r.nodes);
    if (!p.feasible) return std::nullopt;
    if (p.objective > best_primal_value) {
      best_primal_value = p.objective;
      out.best_primal = p.solution;
    }
    return p.objective;
  };

  auto finish = [&](DualStatus s) {
    out.status = s;
    out.dual_bound = st.ub;
    out.lower_bound = st.lb;
    out.iterations = st.iterations;
    out.best_lambda = st.best_lambda;
    out.wall_total = elapsed();
    return out;
  };

  try {
    RelaxationResult r = evaluate_relaxation(inst, table, st.iterate, kind, ropts);
    if (!r.feasible) return finish(DualStatus::relaxation_infeasible);
    out.initial_bound = r.f;
    out.wall_initial = elapsed();
    st.ub = r.f;
    st.cuts.push_back(make_cut(inst, table, r));
    out.witness = r;
    if (auto lb = repair(r)) st.lb = std::min(*lb, st.ub);
    out.initial_lower_bound = st.lb;
    st.trace.push_back({0, r.f, st.lb, st.ub, std::numeric_limits<double>::quiet_NaN(), "initial", elapsed()});

    for (;;) {
      if (st.ub < st.lb) return finish(DualStatus::primal_infeasible);
      if (bundle_converged(st.lb, st.ub, opts.tol)) return finish(DualStatus::converged);
      if (st.iterations >= opts.iter_limit) return finish(DualStatus::iteration_limit);
      if (SteadyClock::now() > stop) return finish(DualStatus::time_limit);
      ++st.iterations;

      const double f_lev = st.level();
      const MasterResult m = solve_master(st.cuts, st.iterate, f_lev);
      if (m.status == MasterStatus::infeasible) {
        st.lb = f_lev;
        st.trace.push_back({st.iterations, std::numeric_limits<double>::quiet_NaN(), st.lb, st.ub, f_lev,
                            "infeasible", elapsed()});
        continue;
      }
      st.iterate = m.lambda;
      r = evaluate_relaxation(inst, table, st.iterate, kind, ropts);
      if (!r.feasible) return finish(DualStatus::relaxation_infeasible);
      st.cuts.push_back(make_cut(inst, table, r));
      if (r.f < st.ub) {
        st.ub = r.f;
        st.best_lambda = st.iterate;
        out.witness = r;
      }
      repair(r);
      st.trace.push_back({st.iterations, r.f, st.lb, st.ub, f_lev, "feasible", elapsed()});
    }
  } catch (const TimeLimitReached&) {
    if (std::isnan(out.initial_bound)) {
      out.status = DualStatus::time_limit;
      out.wall_total = elapsed();
      return out;
    }
    return finish(DualStatus::time_limit);
  }
}

inline nlohmann::json to_json(const TraceRow& row, bool with_wall = true) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json j{{"iter", row.iteration}, {"f", num(row.f)},          {"lb", num(row.lb)},
                   {"ub", num(row.ub)},      {"f_lev", num(row.f_lev)}, {"master", row.master}};
  if (with_wall) j["wall"] = row.wall;
  return j;
}

}  // namespace mctp
