#pragma once

// λ-dependent data of the Lagrangian relaxation: idle candidates, per-arc
// adjusted coverage slopes, the f(λ) assembly and the cut it induces.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mctp/index_table.hpp"
#include "mctp/instance.hpp"
#include "mctp/solution.hpp"

namespace mctp {

enum class SpecialCase { one, two };

inline const char* to_string(SpecialCase c) { return c == SpecialCase::one ? "I" : "II"; }

inline SpecialCase parse_case(const std::string& s) {
  if (s == "I" || s == "1" || s == "i") return SpecialCase::one;
  if (s == "II" || s == "2" || s == "ii") return SpecialCase::two;
  throw std::invalid_argument("unknown case '" + s + "' (expected I or II)");
}

/// λ_w per target, all ≤ 0.
using Multipliers = std::vector<double>;

class RelaxationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RelaxCoeffs {
  SpecialCase kind = SpecialCase::one;
  int nodes = 0;
  int targets = 0;
  double deadline = 0.0;
  double constant = 0.0;              // Σ t_w λ_w
  std::vector<double> weight;         // p̄_w − λ_w
  std::vector<int> idle_set;          // 0 first, then waypoints ascending
  std::vector<double> idle_gain;      // per node; zero for depots
  std::vector<double> lo, hi, length; // per (i, j): d/τmax, d/τmin, d

  bool in_idle_set(int v) const { return slot_of_[v] >= 0; }

  double f(int v, int i, int j) const { return f_[index(v, i, j)]; }
  /// Case I only; the knapsack decides the times in case II.
  double t_star(int v, int i, int j) const { return t_star_[index(v, i, j)]; }
  double c_star(int v, int i, int j) const { return f(v, i, j) * t_star(v, i, j); }
  double min_time(int i, int j) const { return lo[i * nodes + j]; }
  double max_time(int i, int j) const { return hi[i * nodes + j]; }
  double distance(int i, int j) const { return length[i * nodes + j]; }

 private:
  friend RelaxCoeffs build_coeffs(const Instance&, const ArcIndexTable&, const Multipliers&, SpecialCase);

  std::size_t index(int v, int i, int j) const {
    const int s = slot_of_[v];
    if (s < 0) throw std::out_of_range("node " + std::to_string(v) + " is not an idle candidate");
    return (static_cast<std::size_t>(s) * nodes + i) * nodes + j;
  }

  std::vector<int> slot_of_;
  std::vector<double> f_;
  std::vector<double> t_star_;
};

inline void check_multipliers(const Instance& inst, const Multipliers& lambda) {
  if (static_cast<int>(lambda.size()) != inst.target_count())
    throw std::invalid_argument("multiplier vector has wrong length");
  for (double l : lambda)
    if (!(l <= 0.0)) throw std::invalid_argument("multipliers must be <= 0");
}

/// Case I presumes no path can hit the deadline even at minimum speed.
inline void check_case_one_deadline(const Instance& inst) {
  if (inst.deadline() < inst.slowest_path_bound())
    throw RelaxationError("deadline may bind on some path; case I requires a non-binding deadline (use case II)");
}

inline RelaxCoeffs build_coeffs(const Instance& inst, const ArcIndexTable& table,
                                const Multipliers& lambda, SpecialCase kind) {
  check_multipliers(inst, lambda);
  const int N = inst.node_count();
  const int W = inst.target_count();
  RelaxCoeffs rc;
  rc.kind = kind;
  rc.nodes = N;
  rc.targets = W;
  rc.deadline = inst.deadline();
  rc.weight.resize(W);
  for (int w = 0; w < W; ++w) {
    rc.weight[w] = inst.targets()[w].priority - lambda[w];
    rc.constant += inst.targets()[w].required * lambda[w];
  }

  rc.idle_gain.assign(N, 0.0);
  rc.idle_set.push_back(0);
  for (int i = 1; i < inst.exit(); ++i) {
    double g = 0.0;
    for (int w = 0; w < W; ++w) g += rc.weight[w] * table.node_coverage(i, w);
    rc.idle_gain[i] = g;
    if (g > 0.0) rc.idle_set.push_back(i);
  }
  rc.slot_of_.assign(N, -1);
  for (std::size_t s = 0; s < rc.idle_set.size(); ++s) rc.slot_of_[rc.idle_set[s]] = static_cast<int>(s);

  rc.lo.assign(static_cast<std::size_t>(N) * N, 0.0);
  rc.hi = rc.lo;
  rc.length = rc.lo;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (inst.is_path_arc(i, j)) {
        rc.lo[i * N + j] = inst.min_time(i, j);
        rc.hi[i * N + j] = inst.max_time(i, j);
        rc.length[i * N + j] = inst.distance(i, j);
      }

  // Arc coverage value Σ_w (p̄_w − λ_w) c_ijw d̄/d, shared by every v̄.
  std::vector<double> arc_value(static_cast<std::size_t>(N) * N, 0.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (!inst.is_path_arc(i, j)) continue;
      double s = 0.0;
      for (int w = 0; w < W; ++w) s += rc.weight[w] * table.coverage_rate(i, j, w);
      arc_value[i * N + j] = s;
    }

  const std::size_t per = static_cast<std::size_t>(N) * N;
  rc.f_.assign(rc.idle_set.size() * per, 0.0);
  rc.t_star_.assign(rc.f_.size(), 0.0);
  for (std::size_t s = 0; s < rc.idle_set.size(); ++s) {
    const double gain = rc.idle_gain[rc.idle_set[s]];
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (!inst.is_path_arc(i, j)) continue;
        const double f = arc_value[i * N + j] - gain;
        rc.f_[s * per + i * N + j] = f;
        rc.t_star_[s * per + i * N + j] =
            (kind == SpecialCase::two || f <= 0.0) ? rc.lo[i * N + j] : rc.hi[i * N + j];
      }
  }
  return rc;
}

struct LabelStats {
  long created = 0;
  long dominated = 0;
  long killed = 0;
  long closed = 0;
  long bounded = 0;  // dropped because they cannot beat the incumbent
};

/// Best path for one idle candidate. `value` is Σ f·t over the path, i.e.
/// without Σ t_w λ_w and without the T·idle_gain term.
struct PathValue {
  int vbar = 0;
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
  std::vector<int> nodes;
  std::vector<double> times;
  LabelStats stats;
};

struct RelaxationResult {
  bool feasible = false;
  double f = std::numeric_limits<double>::infinity();
  int vbar = 0;
  std::vector<int> nodes;
  std::vector<double> times;
  double idle = 0.0;  // y at vbar
  std::vector<PathValue> per_vbar;
};

inline double candidate_value(const RelaxCoeffs& rc, const PathValue& pv) {
  return (pv.vbar != 0 ? rc.idle_gain[pv.vbar] * rc.deadline : 0.0) + pv.value;
}

inline RelaxationResult assemble_f_value(const RelaxCoeffs& rc, std::vector<PathValue> best) {
  RelaxationResult r;
  const PathValue* arg = nullptr;
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& pv : best) {
    if (!pv.feasible) continue;
    const double v = candidate_value(rc, pv);
    if (arg == nullptr || v > top) {
      top = v;
      arg = &pv;
    }
  }
  if (arg != nullptr) {
    r.feasible = true;
    r.f = rc.constant + top;
    r.vbar = arg->vbar;
    r.nodes = arg->nodes;
    r.times = arg->times;
    if (r.vbar != 0) {
      double used = 0.0;
      for (double t : r.times) used += t;
      r.idle = std::max(0.0, rc.deadline - used);
    }
  }
  r.per_vbar = std::move(best);
  return r;
}

/// Affine minorant θ ≥ Σ_w (t_w − α̂_w) λ_w + Σ_w p̄_w α̂_w.
struct CutCoeffs {
  std::vector<double> alpha;
  std::vector<double> slope;  // t_w − α̂_w
  double intercept = 0.0;     // Σ p̄_w α̂_w

  double operator()(const Multipliers& lambda) const {
    double v = intercept;
    for (std::size_t w = 0; w < slope.size(); ++w) v += slope[w] * lambda[w];
    return v;
  }
};

inline CutCoeffs make_cut(const Instance& inst, const ArcIndexTable& table, const RelaxationResult& r) {
  if (!r.feasible) throw RelaxationError("cannot build a cut from an infeasible relaxation");
  const int W = inst.target_count();
  CutCoeffs cut;
  cut.alpha.assign(W, 0.0);
  double used = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    used += r.times[k];
    for (int w = 0; w < W; ++w)
      cut.alpha[w] += table.coverage_rate(r.nodes[k], r.nodes[k + 1], w) * r.times[k];
  }
  if (r.vbar != 0)
    for (int w = 0; w < W; ++w) cut.alpha[w] += table.node_coverage(r.vbar, w) * (inst.deadline() - used);
  cut.slope.resize(W);
  for (int w = 0; w < W; ++w) {
    cut.slope[w] = inst.targets()[w].required - cut.alpha[w];
    cut.intercept += inst.targets()[w].priority * cut.alpha[w];
  }
  return cut;
}

/// The relaxation witness as a route: idle T − Σt at v̄ when v̄ ≠ 0.
inline PathSolution witness_solution(const Instance& inst, const ArcIndexTable& table,
                                     const RelaxationResult& r) {
  PathSolution sol;
  sol.nodes = r.nodes;
  sol.arc_times = r.times;
  if (r.vbar != 0 && r.idle > 0.0) sol.idle.push_back({r.vbar, r.idle});
  evaluate(inst, table, sol);
  sol.objective = route_objective(inst, sol.per_target_coverage);
  return sol;
}

}  // namespace mctp
