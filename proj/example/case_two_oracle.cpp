// Evaluate the case II relaxation at a few multipliers, compare it with
// brute-force enumeration, and compare the two knapsack orderings.

#include <cstdio>

#include "mctp/mctp.hpp"

int main() {
  auto params = mctp::preset_params("custom");
  params.waypoints = 5;
  params.targets = 4;
  params.field = 40.0;
  params.deadline_scale = 0.2;
  const auto inst = mctp::generate_instance(21, params).instance;
  const auto table = mctp::build_index_table(inst);

  for (double scale : {0.0, 1.0, 5.0}) {
    mctp::Multipliers lambda(inst.target_count(), -scale);
    const auto slope = mctp::evaluate_relaxation(inst, table, lambda, mctp::SpecialCase::two);
    const auto ratio = mctp::evaluate_relaxation(inst, table, lambda, mctp::SpecialCase::two,
                                                 {.mode = mctp::KeyMode::per_distance});
    const auto oracle = mctp::oracle_relaxation(inst, table, lambda, mctp::SpecialCase::two);
    std::printf("lambda = %4.1f  labeling %.6f  per-distance %.6f  enumeration %.6f  (%ld paths)\n", 0.0 - scale,
                slope.f, ratio.f, oracle.value, oracle.paths);
  }

  const auto primal = mctp::oracle_primal(inst, table);
  const auto dual = mctp::run_dual(inst, mctp::SpecialCase::two);
  std::printf("primal optimum %.6f <= dual bound %.6f (%s, %d iterations)\n", primal.objective, dual.dual_bound,
              mctp::to_string(dual.status), dual.iterations);
}
