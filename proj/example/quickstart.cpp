// Generate a small instance, bound it with the level bundle method and
// print the first few trace rows.

#include <cstdio>

#include "mctp/mctp.hpp"

int main() {
  auto params = mctp::preset_params("small");
  params.waypoints = 6;
  const auto gen = mctp::generate_instance(7, params);
  const auto& inst = gen.instance;

  mctp::DualOptions opts;
  opts.iter_limit = 60;
  const auto res = mctp::run_dual(inst, mctp::SpecialCase::one, opts);

  std::printf("waypoints %d, targets %d, deadline %.1f\n", inst.waypoint_count(), inst.target_count(),
              inst.deadline());
  std::printf("status %s after %d iterations\n", mctp::to_string(res.status), res.iterations);
  std::printf("f(0) = %.4f  dual bound = %.4f\n", res.initial_bound, res.dual_bound);
  for (const auto& row : res.state.trace) {
    if (row.iteration > 5) break;
    std::printf("  iter %2d  lb %.4f  ub %.4f  (%s)\n", row.iteration, row.lb, row.ub, row.master.c_str());
  }
  if (res.best_primal) std::printf("best route found: objective %.4f\n", res.best_primal->objective);
}
