#pragma once

// Case II (binding deadline). On a fixed path the timing problem is a
// continuous knapsack: every arc starts at its minimum time, then arcs with
// positive slope f are lengthened in decreasing order of key until the
// budget runs out, leaving at most one arc strictly between its bounds.
// Labels keep the whole tradeoff set of their prefix, which determines the
// prefix's best value as a function of the time it uses; the knapsack is
// resolved only when a label is closed at n+1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mctp/labeling_engine.hpp"
#include "mctp/relaxation.hpp"

namespace mctp {

enum class KeyMode { slope, per_distance };

inline const char* to_string(KeyMode m) { return m == KeyMode::slope ? "slope" : "per-distance"; }

inline KeyMode parse_key_mode(const std::string& s) {
  if (s == "slope") return KeyMode::slope;
  if (s == "per-distance") return KeyMode::per_distance;
  throw std::invalid_argument("unknown ratio mode '" + s + "' (expected slope or per-distance)");
}

/// One arc of a path.
struct ArcTerm {
  double slope = 0.0;   // f
  double lo = 0.0;      // d / τmax
  double hi = 0.0;      // d / τmin
  double length = 0.0;  // d
  int arc = -1;

  double key(KeyMode m) const { return m == KeyMode::slope ? slope : slope / length; }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A positive-slope arc whose time can still be raised above its minimum.
struct TradeoffArc {
  double key = 0.0;
  double slope = 0.0;
  double span = 0.0;  // hi - lo
  int arc = -1;
};

/// Tradeoff arcs sorted by decreasing key, ties by arc id.
using TradeoffSet = std::vector<TradeoffArc>;

inline void insert_tradeoff(TradeoffSet& set, const ArcTerm& a, KeyMode m) {
  if (!(a.slope > 0.0)) return;
  TradeoffArc x{a.key(m), a.slope, a.hi - a.lo, a.arc};
  auto pos = std::find_if(set.begin(), set.end(), [&](const TradeoffArc& y) {
    return y.key < x.key || (y.key == x.key && y.arc > x.arc);
  });
  set.insert(pos, x);
}

/// Greedy use of `slack` extra time over a tradeoff set.
struct Fill {
  double value = 0.0;
  std::vector<std::pair<int, double>> extra;  // (arc, added time)
};

inline Fill fill_slack(const TradeoffSet& set, double slack) {
  Fill out;
  for (const auto& a : set) {
    if (slack <= 0.0) break;
    const double d = std::min(slack, a.span);
    out.value += a.slope * d;
    out.extra.emplace_back(a.arc, d);
    slack -= d;
  }
  return out;
}

/// Best value of a prefix as a function of its time: vertices (t, c) from
/// all-minimum times up to all-maximum times, in fill order.
inline std::vector<std::pair<double, double>> value_curve(double t, double c, const TradeoffSet& set) {
  std::vector<std::pair<double, double>> v{{t, c}};
  for (const auto& a : set) {
    t += a.span;
    c += a.slope * a.span;
    v.emplace_back(t, c);
  }
  return v;
}

/// Curve value at time t, flat past the last vertex (unused time is idle).
inline double curve_at(const std::vector<std::pair<double, double>>& curve, double t) {
  if (t <= curve.front().first) return curve.front().second;
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const auto [t0, c0] = curve[k];
    const auto [t1, c1] = curve[k + 1];
    if (t <= t1) return t1 > t0 ? c0 + (c1 - c0) * (t - t0) / (t1 - t0) : c1;
  }
  return curve.back().second;
}

/// a starts no later than b and is at least as high as b over b's range.
inline bool curve_dominates(const std::vector<std::pair<double, double>>& a,
                            const std::vector<std::pair<double, double>>& b, double tol = 1e-12) {
  const double t0 = b.front().first, t1 = b.back().first;
  if (a.front().first > t0 + tol * std::max(1.0, std::abs(t0))) return false;
  auto check = [&](double t) {
    const double cb = curve_at(b, t);
    return curve_at(a, t) >= cb - tol * std::max(1.0, std::abs(cb));
  };
  for (const auto& p : a)
    if (p.first >= t0 && p.first <= t1 && !check(p.first)) return false;
  for (const auto& p : b)
    if (!check(p.first)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Labels

struct LabelC2 {
  int end = 0;
  NodeSet visited;
  int parent = -1;
  double c = 0.0;  // value with every arc at minimum time
  double t = 0.0;  // time with every arc at minimum time
  TradeoffSet tradeoffs;

  double t_max() const {
    double x = t;
    for (const auto& a : tradeoffs) x += a.span;
    return x;
  }
  double c_max() const {
    double x = c;
    for (const auto& a : tradeoffs) x += a.slope * a.span;
    return x;
  }
  std::vector<std::pair<double, double>> curve() const { return value_curve(t, c, tradeoffs); }
};

inline bool dominates_case2(const LabelC2& a, const LabelC2& b, int vbar) {
  if (a.end != b.end || !a.visited.subset_of(b.visited)) return false;
  if (vbar != 0 && a.visited.contains(vbar) != b.visited.contains(vbar)) return false;
  if (!(a.c >= b.c && a.t <= b.t)) return false;
  if (!(a.c > b.c || a.t < b.t)) return false;
  return curve_dominates(a.curve(), b.curve());
}

/// Prefix check: the label's time plus the arc at minimum time, plus the
/// shortest way to finish (through v̄ when it is still unvisited), fits in T.
inline bool feasible_extension(const RelaxCoeffs& rc, const Instance& inst, double t, NodeSet visited, int i, int j,
                               int vbar) {
  const int exit = inst.exit();
  double closing;
  if (vbar == 0 || visited.contains(vbar) || j == vbar)
    closing = j == exit ? 0.0 : rc.min_time(j, exit);
  else
    closing = rc.min_time(j, vbar) + rc.min_time(vbar, exit);
  return t + rc.min_time(i, j) + closing <= rc.deadline;
}

class Case2Policy {
 public:
  using Label = LabelC2;
  struct Closing {
    double value = 0.0;
    Fill fill;
  };

  Case2Policy(const RelaxCoeffs& rc, const Instance& inst, int vbar, KeyMode mode)
      : rc_(rc),
        inst_(inst),
        vbar_(vbar),
        mode_(mode),
        exit_(inst.exit()),
        at_best_(rc.nodes, [&](int i, int j) { return rc.f(vbar, i, j) * (rc.f(vbar, i, j) > 0.0 ? rc.max_time(i, j) : rc.min_time(i, j)); }),
        at_min_(rc.nodes, [&](int i, int j) { return rc.f(vbar, i, j) * rc.min_time(i, j); }),
        longest_(rc.nodes, [&](int i, int j) { return rc.max_time(i, j); }) {
    for (int i = 0; i < exit_; ++i)
      for (int j = 1; j <= exit_; ++j)
        if (i != j) steepest_ = std::max(steepest_, rc.f(vbar, i, j));
  }

  ArcTerm term(int i, int j) const {
    return {rc_.f(vbar_, i, j), rc_.min_time(i, j), rc_.max_time(i, j), rc_.distance(i, j), i * rc_.nodes + j};
  }

  Label root() const {
    Label l;
    l.visited = NodeSet{}.with(0);
    return l;
  }

  Label push(const Label& l, int j) const {
    const ArcTerm a = term(l.end, j);
    Label child;
    child.end = j;
    child.visited = l.visited.with(j);
    child.c = l.c + a.slope * a.lo;
    child.t = l.t + a.lo;
    child.tradeoffs = l.tradeoffs;
    insert_tradeoff(child.tradeoffs, a, mode_);
    return child;
  }

  template <class Emit>
  void extend(const Label& l, int j, Emit&& emit) const {
    if (!feasible_extension(rc_, inst_, l.t, l.visited, l.end, j, vbar_)) return;
    emit(push(l, j));
  }

  // A label that fits every possible completion at maximum time closes with
  // all of its slack filled, so only its saturated value matters.
  bool dominates(const Label& a, const Label& b) const {
    if (a.end == b.end && a.t_max() + longest_(a.end, a.visited.size()) <= rc_.deadline && a.visited.subset_of(b.visited) &&
        (vbar_ == 0 || a.visited.contains(vbar_) == b.visited.contains(vbar_)) && a.c_max() > b.c_max())
      return true;
    return dominates_case2(a, b, vbar_);
  }

  // Any closing from l is at most c plus the best use of the remaining slack
  // on l's own tradeoffs plus the completion's arcs at their better bound;
  // or at most c plus the completion at minimum times plus the slack spent at
  // the steepest slope available anywhere.
  double bound(const Label& l) const {
    const double slack = std::max(0.0, rc_.deadline - l.t - rc_.min_time(l.end, exit_));
    double own = 0.0, steepest = steepest_;
    if (mode_ == KeyMode::slope) {
      double left = slack;
      for (const auto& a : l.tradeoffs) {
        if (left <= 0.0) break;
        const double d = std::min(left, a.span);
        own += a.slope * d;
        left -= d;
      }
    } else {
      double total = 0.0, top = 0.0;
      for (const auto& a : l.tradeoffs) total += a.slope * a.span, top = std::max(top, a.slope);
      own = std::min(total, slack * top);
    }
    for (const auto& a : l.tradeoffs) steepest = std::max(steepest, a.slope);
    const int n = l.visited.size();
    return l.c + std::min(own + at_best_(l.end, n), at_min_(l.end, n) + slack * steepest);
  }

  std::optional<Closing> close(const Label& l) const {
    if (l.end == 0) return std::nullopt;
    if (vbar_ != 0 && !l.visited.contains(vbar_)) return std::nullopt;
    const Label full = push(l, exit_);
    if (full.t > rc_.deadline) return std::nullopt;
    Closing out;
    out.fill = fill_slack(full.tradeoffs, rc_.deadline - full.t);
    out.value = full.c + out.fill.value;
    return out;
  }

 private:
  const RelaxCoeffs& rc_;
  const Instance& inst_;
  int vbar_;
  KeyMode mode_;
  int exit_;
  WalkBound at_best_;
  WalkBound at_min_;
  WalkBound longest_;
  double steepest_ = 0.0;
};

struct Case2Options {
  bool dominance = true;
  KeyMode mode = KeyMode::slope;
  std::optional<SteadyClock::time_point> deadline;
};

/// Arc times from minimum times plus a fill.
inline std::vector<double> apply_fill(const std::vector<ArcTerm>& arcs, const Fill& fill) {
  std::vector<double> t;
  for (const auto& a : arcs) {
    double x = a.lo;
    for (const auto& [arc, d] : fill.extra)
      if (arc == a.arc) x += d;
    t.push_back(x);
  }
  return t;
}

inline PathValue solve_case2(const RelaxCoeffs& rc, const Instance& inst, int vbar, const Case2Options& opts = {}) {
  if (rc.kind != SpecialCase::two) throw std::invalid_argument("solve_case2 needs case II coefficients");
  if (vbar < 0 || vbar >= inst.exit() || !rc.in_idle_set(vbar))
    throw std::invalid_argument("idle candidate " + std::to_string(vbar) + " is not in the idle set");
  Case2Policy policy(rc, inst, vbar, opts.mode);
  auto res = run_labeling(policy, rc.nodes, EngineOptions{opts.dominance, opts.deadline});

  PathValue pv;
  pv.vbar = vbar;
  pv.stats = res.stats;
  if (!res.found) return pv;
  pv.feasible = true;
  pv.value = res.best.value;
  pv.nodes = res.path;
  pv.nodes.push_back(inst.exit());
  std::vector<ArcTerm> arcs;
  for (std::size_t k = 0; k + 1 < pv.nodes.size(); ++k) arcs.push_back(policy.term(pv.nodes[k], pv.nodes[k + 1]));
  pv.times = apply_fill(arcs, res.best.fill);
  return pv;
}

// ---------------------------------------------------------------------------
// Fixed path

struct FixedPathTiming {
  bool feasible = false;
  double value = -kInf;
  std::vector<double> times;
};

/// Knapsack timing of a fixed arc sequence under Σt ≤ budget.
inline FixedPathTiming solve_fixed_path(std::vector<ArcTerm> arcs, double budget, KeyMode mode = KeyMode::slope) {
  double c = 0.0, t = 0.0;
  TradeoffSet set;
  for (std::size_t q = 0; q < arcs.size(); ++q) {
    arcs[q].arc = static_cast<int>(q);
    c += arcs[q].slope * arcs[q].lo;
    t += arcs[q].lo;
    insert_tradeoff(set, arcs[q], mode);
  }
  FixedPathTiming out;
  if (t > budget) return out;
  const Fill fill = fill_slack(set, budget - t);
  out.feasible = true;
  out.value = c + fill.value;
  out.times = apply_fill(arcs, fill);
  return out;
}

}  // namespace mctp
