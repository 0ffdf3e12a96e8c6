#pragma once

#include <string>
#include <vector>

#include "mctp/geometry.hpp"
#include "mctp/instance.hpp"

namespace mctp {

class IndexTableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Risk and coverage indices for every (arc, target) and (waypoint, target)
/// pair of an instance. Entries for non-arcs stay zero.
class ArcIndexTable {
 public:
  ArcIndexTable() = default;
  ArcIndexTable(int nodes, int targets)
      : nodes_(nodes),
        targets_(targets),
        arc_cov_(static_cast<std::size_t>(nodes) * nodes * targets),
        arc_risk_(arc_cov_.size()),
        node_cov_(static_cast<std::size_t>(nodes) * targets, 0.0),
        node_risk_(node_cov_.size(), 0.0) {}

  int nodes() const { return nodes_; }
  int targets() const { return targets_; }

  const ArcIndex& coverage(int i, int j, int w) const { return arc_cov_[slot(i, j, w)]; }
  const ArcIndex& risk(int i, int j, int w) const { return arc_risk_[slot(i, j, w)]; }
  ArcIndex& coverage(int i, int j, int w) { return arc_cov_[slot(i, j, w)]; }
  ArcIndex& risk(int i, int j, int w) { return arc_risk_[slot(i, j, w)]; }

  /// c_ijw · d̄_ijw / d(i,j): coverage of w per unit time on arc (i, j).
  double coverage_rate(int i, int j, int w) const { return coverage(i, j, w).rate(); }
  double risk_rate(int i, int j, int w) const { return risk(i, j, w).rate(); }

  /// c_iw and r_iw; both are zero at the depots.
  double node_coverage(int i, int w) const { return node_cov_[static_cast<std::size_t>(i) * targets_ + w]; }
  double node_risk(int i, int w) const { return node_risk_[static_cast<std::size_t>(i) * targets_ + w]; }
  double& node_coverage(int i, int w) { return node_cov_[static_cast<std::size_t>(i) * targets_ + w]; }
  double& node_risk(int i, int w) { return node_risk_[static_cast<std::size_t>(i) * targets_ + w]; }

  friend bool operator==(const ArcIndexTable&, const ArcIndexTable&) = default;

 private:
  std::size_t slot(int i, int j, int w) const {
    return (static_cast<std::size_t>(i) * nodes_ + j) * targets_ + w;
  }

  int nodes_ = 0;
  int targets_ = 0;
  std::vector<ArcIndex> arc_cov_;
  std::vector<ArcIndex> arc_risk_;
  std::vector<double> node_cov_;
  std::vector<double> node_risk_;
};

inline ArcIndexTable build_index_table(const Instance& inst) {
  const int n_nodes = inst.node_count();
  const int n_targets = inst.target_count();
  const double eps = inst.clearance();
  const auto& veh = inst.vehicle();
  ArcIndexTable table(n_nodes, n_targets);

  for (auto [i, j] : inst.arcs()) {
    for (int w = 0; w < n_targets; ++w) {
      const Target& t = inst.targets()[w];
      try {
        table.coverage(i, j, w) = arc_coverage_index(inst.position(i), inst.position(j), t.pos,
                                                     veh.rho, veh.coverage_radius, eps);
        table.risk(i, j, w) =
            arc_risk_index(inst.position(i), inst.position(j), t.pos, t.sigma, t.risk_radius, eps);
      } catch (const GeometryError& e) {
        throw IndexTableError(std::string(e.what()) + " (arc " + std::to_string(i) + "->" +
                              std::to_string(j) + ", target " + std::to_string(t.id) + ")");
      }
    }
  }
  for (int i = 1; i < inst.exit(); ++i) {
    for (int w = 0; w < n_targets; ++w) {
      const Target& t = inst.targets()[w];
      try {
        table.node_coverage(i, w) =
            point_index(inst.position(i), t.pos, veh.rho, veh.coverage_radius, eps);
        table.node_risk(i, w) = point_index(inst.position(i), t.pos, t.sigma, t.risk_radius, eps);
      } catch (const GeometryError& e) {
        throw IndexTableError(std::string(e.what()) + " (waypoint " + std::to_string(i) +
                              ", target " + std::to_string(t.id) + ")");
      }
    }
  }
  return table;
}

}  // namespace mctp
