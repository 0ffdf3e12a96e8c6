#pragma once

// Case I (non-binding deadline): every arc is timed at one of its bounds by
// the sign of its slope, so the per-candidate problem is a longest simple
// path over fixed arc values c*.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "mctp/labeling_engine.hpp"
#include "mctp/relaxation.hpp"

namespace mctp {

struct LabelC1 {
  int end = 0;
  NodeSet visited;
  int parent = -1;
  double c = 0.0;
  mutable double extra = std::numeric_limits<double>::quiet_NaN();  // lazily filled c_extra
};

/// Worst-case change in value when v̄ is inserted just before n+1 in some
/// completion of `l`. The last node before n+1 is either an unvisited
/// waypoint or the label's own end node (empty completion).
inline double c_extra(const RelaxCoeffs& rc, int vbar, const LabelC1& l) {
  if (vbar == 0) return 0.0;
  if (!std::isnan(l.extra)) return l.extra;
  const int exit = rc.nodes - 1;
  double worst = std::numeric_limits<double>::infinity();
  auto consider = [&](int i) {
    if (i == vbar || i == 0) return;
    worst = std::min(worst, rc.c_star(vbar, i, vbar) + rc.c_star(vbar, vbar, exit) - rc.c_star(vbar, i, exit));
  };
  for (int i = 1; i < exit; ++i)
    if (!l.visited.contains(i)) consider(i);
  consider(l.end);
  l.extra = worst;
  return worst;
}

inline bool dominates_case1(const LabelC1& a, const LabelC1& b, int vbar, double extra_b) {
  if (a.end != b.end || !a.visited.subset_of(b.visited)) return false;
  if (vbar == 0) return a.c >= b.c;
  const bool va = a.visited.contains(vbar), vb = b.visited.contains(vbar);
  if (va == vb) return a.c >= b.c;
  if (!va && vb) return std::isfinite(extra_b) && a.c + extra_b >= b.c;
  return false;
}

class Case1Policy {
 public:
  using Label = LabelC1;
  struct Closing {
    double value = 0.0;
  };

  Case1Policy(const RelaxCoeffs& rc, int vbar)
      : rc_(rc), vbar_(vbar), exit_(rc.nodes - 1), walk_(rc.nodes, [&](int i, int j) { return rc.c_star(vbar, i, j); }) {}

  Label root() const {
    Label l;
    l.visited = NodeSet{}.with(0);
    return l;
  }

  template <class Emit>
  void extend(const Label& l, int j, Emit&& emit) const {
    Label child;
    child.end = j;
    child.visited = l.visited.with(j);
    child.c = l.c + rc_.c_star(vbar_, l.end, j);
    emit(std::move(child));
  }

  bool dominates(const Label& a, const Label& b) const {
    if (a.end != b.end || !a.visited.subset_of(b.visited)) return false;
    const bool clause2 = vbar_ != 0 && !a.visited.contains(vbar_) && b.visited.contains(vbar_);
    return dominates_case1(a, b, vbar_, clause2 ? c_extra(rc_, vbar_, b) : 0.0);
  }

  std::optional<Closing> close(const Label& l) const {
    if (l.end == 0) return std::nullopt;
    if (vbar_ != 0 && !l.visited.contains(vbar_)) return std::nullopt;
    return Closing{l.c + rc_.c_star(vbar_, l.end, exit_)};
  }

  double bound(const Label& l) const { return l.c + walk_(l.end, l.visited.size()); }

 private:
  const RelaxCoeffs& rc_;
  int vbar_;
  int exit_;
  WalkBound walk_;
};

struct LabelingOptions {
  bool dominance = true;
  std::optional<SteadyClock::time_point> deadline;
};

inline void check_vbar(const RelaxCoeffs& rc, int vbar) {
  if (vbar < 0 || vbar >= rc.nodes - 1 || !rc.in_idle_set(vbar))
    throw std::invalid_argument("idle candidate " + std::to_string(vbar) + " is not in the idle set");
}

inline PathValue solve_case1(const RelaxCoeffs& rc, int vbar, const LabelingOptions& opts = {}) {
  if (rc.kind != SpecialCase::one) throw std::invalid_argument("solve_case1 needs case I coefficients");
  check_vbar(rc, vbar);
  Case1Policy policy(rc, vbar);
  auto res = run_labeling(policy, rc.nodes, EngineOptions{opts.dominance, opts.deadline});

  PathValue pv;
  pv.vbar = vbar;
  pv.stats = res.stats;
  if (!res.found) return pv;
  pv.feasible = true;
  pv.value = res.best.value;
  pv.nodes = res.path;
  pv.nodes.push_back(rc.nodes - 1);
  for (std::size_t k = 0; k + 1 < pv.nodes.size(); ++k)
    pv.times.push_back(rc.t_star(vbar, pv.nodes[k], pv.nodes[k + 1]));
  return pv;
}

}  // namespace mctp
