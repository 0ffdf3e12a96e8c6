#pragma once

// Label-correcting search over simple 0 -> n+1 paths, processed by number of
// visited nodes. A new label is tested only against labels with the same end
// and either the same visited set or that set minus one node; checking a
// subset of the dominance relation stays exact and keeps each insert cheap. The problem-specific parts (label contents, extension,
// dominance, closing a label at n+1) come from a policy:
//
//   struct Policy {
//     using Label = ...;    // has: int end; NodeSet visited; int parent;
//     using Closing = ...;  // has: double value;
//     Label root() const;
//     template <class Emit> void extend(const Label&, int j, Emit&&) const;
//     bool dominates(const Label& a, const Label& b) const;
//     std::optional<Closing> close(const Label&) const;
//     double bound(const Label&) const;  // optional: ≥ any closing reachable
//   };
//
// With pruning on, a label whose bound is below the best closing found so
// far is dropped as well.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mctp/instance.hpp"
#include "mctp/relaxation.hpp"

namespace mctp {

class TimeLimitReached : public std::runtime_error {
 public:
  TimeLimitReached() : std::runtime_error("time limit reached") {}
};

using SteadyClock = std::chrono::steady_clock;

struct EngineOptions {
  bool dominance = true;
  std::optional<SteadyClock::time_point> deadline;
};

template <class Policy>
struct EngineResult {
  bool found = false;
  typename Policy::Closing best{};
  std::vector<int> path;  // label end nodes, root first; closing at n+1 not included
  LabelStats stats;
};

template <class Policy>
class LabelingEngine {
 public:
  using Label = typename Policy::Label;
  using Closing = typename Policy::Closing;

  LabelingEngine(const Policy& policy, int node_count, EngineOptions opts)
      : policy_(policy), nodes_(node_count), opts_(opts) {}

  EngineResult<Policy> run() {
    const int exit = nodes_ - 1;
    labels_.clear();
    trail_.clear();
    has_incumbent_ = false;
    alive_.clear();
    groups_.assign(nodes_, {});
    stages_.assign(nodes_, {});

    EngineResult<Policy> out;
    int best_label = -1;
    insert(policy_.root(), out.stats);

    for (int stage = 0; stage < nodes_; ++stage) {
      if (stage >= 1) release(stage - 1);
      for (std::size_t k = 0; k < stages_[stage].size(); ++k) {
        const int idx = stages_[stage][k];
        if (!alive_[idx]) continue;
        tick();
        const Label parent = labels_[idx];
        if (auto c = policy_.close(parent)) {
          ++out.stats.closed;
          if (!out.found || c->value > out.best.value) {
            out.found = true;
            out.best = *c;
            best_label = idx;
            has_incumbent_ = true;
            incumbent_ = c->value;
          }
        }
        for (int j = 1; j < exit; ++j) {
          if (parent.visited.contains(j)) continue;
          policy_.extend(parent, j, [&](Label child) {
            child.parent = idx;
            insert(std::move(child), out.stats);
          });
        }
      }
    }

    for (int at = best_label; at >= 0; at = trail_[at].parent) out.path.push_back(trail_[at].end);
    std::reverse(out.path.begin(), out.path.end());
    return out;
  }

 private:
  // Children of stage s are compared only with stages s and s+1, so once
  // stage s starts, stage s-1 is needed for path recovery alone.
  void release(int stage) {
    for (int idx : stages_[stage]) {
      if (opts_.dominance) groups_[labels_[idx].end].erase(labels_[idx].visited.bits);
      labels_[idx] = Label{};
    }
    std::vector<int>().swap(stages_[stage]);
  }

  void tick() {
    if (opts_.deadline && (++ticks_ & 1023) == 0 && SteadyClock::now() > *opts_.deadline)
      throw TimeLimitReached();
  }

  void insert(Label child, LabelStats& stats) {
    ++stats.created;
    if constexpr (requires { policy_.bound(child); }) {
      if (opts_.dominance && has_incumbent_ &&
          policy_.bound(child) < incumbent_ - 1e-9 * std::max(1.0, std::abs(incumbent_))) {
        ++stats.bounded;
        return;
      }
    }
    auto& groups = groups_[child.end];
    if (opts_.dominance) {
      // Labels are created in stage order, so nothing in the pool has a
      // strictly larger visited set yet: the child can only kill its own group.
      auto dominated_by = [&](std::uint64_t mask) {
        const auto it = groups.find(mask);
        if (it == groups.end()) return false;
        for (int other : it->second)
          if (policy_.dominates(labels_[other], child)) return true;
        return false;
      };
      const std::uint64_t mask = child.visited.bits;
      bool dominated = dominated_by(mask);
      const std::uint64_t fixed = (std::uint64_t{1} << child.end) | 1u;
      for (std::uint64_t rest = mask & ~fixed; rest != 0 && !dominated; rest &= rest - 1)
        dominated = dominated_by(mask & ~(rest & -rest));
      if (dominated) {
        ++stats.dominated;
        return;
      }
      if (auto it = groups.find(mask); it != groups.end()) {
        auto& same = it->second;
        std::size_t keep = 0;
        for (int other : same) {
          if (policy_.dominates(child, labels_[other])) {
            alive_[other] = 0;
            ++stats.killed;
          } else {
            same[keep++] = other;
          }
        }
        same.resize(keep);
      }
    }
    const int idx = static_cast<int>(labels_.size());
    const int stage = child.visited.size() - 1;
    if (opts_.dominance) groups[child.visited.bits].push_back(idx);
    trail_.push_back({child.end, child.parent});
    labels_.push_back(std::move(child));
    alive_.push_back(1);
    stages_[stage].push_back(idx);
  }

  const Policy& policy_;
  int nodes_;
  EngineOptions opts_;
  long ticks_ = 0;
  bool has_incumbent_ = false;
  double incumbent_ = 0.0;
  struct Link {
    int end;
    int parent;
  };
  std::vector<Label> labels_;
  std::vector<Link> trail_;
  std::vector<char> alive_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<int>>> groups_;  // per end, by visited set
  std::vector<std::vector<int>> stages_;
};

/// Best value of a walk (repeated nodes allowed) with at most k arcs from
/// each interior node to n+1 under arc weights w(i, j). Every simple
/// completion with at most k arcs is such a walk, so this bounds them all.
class WalkBound {
 public:
  template <class Weight>
  WalkBound(int nodes, Weight&& w)
      : nodes_(nodes), table_(static_cast<std::size_t>(nodes) * nodes, -std::numeric_limits<double>::infinity()) {
    const int exit = nodes - 1;
    for (int j = 1; j < exit; ++j) at(1, j) = w(j, exit);
    for (int k = 2; k < nodes; ++k)
      for (int j = 1; j < exit; ++j) {
        double best = at(k - 1, j);
        for (int l = 1; l < exit; ++l)
          if (l != j) best = std::max(best, w(j, l) + at(k - 1, l));
        at(k, j) = best;
      }
  }

  /// Bound for a label ending at j that has visited `visited` nodes in all
  /// (depot 0 included): at most n + 2 - visited arcs remain.
  double operator()(int j, int visited) const { return table_[static_cast<std::size_t>(nodes_ - visited) * nodes_ + j]; }

 private:
  double& at(int k, int j) { return table_[static_cast<std::size_t>(k) * nodes_ + j]; }

  int nodes_;
  std::vector<double> table_;
};

template <class Policy>
EngineResult<Policy> run_labeling(const Policy& policy, int node_count, EngineOptions opts = {}) {
  LabelingEngine<Policy> engine(policy, node_count, opts);
  return engine.run();
}

}  // namespace mctp
