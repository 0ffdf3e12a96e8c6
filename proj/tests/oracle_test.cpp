#include <gtest/gtest.h>

#include "support.hpp"

namespace mctp {
namespace {

using testing::desk_instance;
using testing::Rng;

TEST(Oracle, PathCountAndOrder) {
  for (int n = 1; n <= 6; ++n) {
    const auto inst = desk_instance(80 + n, n, 2);
    std::vector<std::vector<int>> seen;
    const long count = enumerate_paths(inst, {}, [&](const std::vector<int>& p) { seen.push_back(p); });
    EXPECT_EQ(count, analytic_path_count(n));
    EXPECT_EQ(static_cast<long>(seen.size()), count);
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    for (const auto& p : seen) {
      EXPECT_EQ(p.front(), 0);
      EXPECT_EQ(p.back(), inst.exit());
    }
  }
  EXPECT_EQ(analytic_path_count(3), 15);
}

TEST(Oracle, BudgetRefusal) {
  const auto inst = desk_instance(90, 5, 2);
  EXPECT_THROW(enumerate_paths(inst, {.max_waypoints = 4}, [](const auto&) {}), BudgetExceeded);
  EXPECT_THROW(enumerate_paths(inst, {.max_paths = 100}, [](const auto&) {}), BudgetExceeded);
}

TEST(Oracle, DeadlineBelowEveryPath) {
  const auto inst = desk_instance(91, 3, 2).with_deadline(1e-6);
  const auto table = build_index_table(inst);
  EXPECT_FALSE(oracle_relaxation(inst, table, {0.0, 0.0}, SpecialCase::two).feasible);
  EXPECT_FALSE(oracle_primal(inst, table).feasible);
}

TEST(Oracle, ZeroWeightsGiveConstant) {
  const auto inst = desk_instance(92, 3, 3);
  auto zero = inst.targets();
  for (auto& t : zero) t.priority = 0.0;
  const auto inst0 = inst.with_targets(zero);
  const auto table = build_index_table(inst0);
  const auto o = oracle_relaxation(inst0, table, {0.0, 0.0, 0.0}, SpecialCase::one);
  EXPECT_EQ(o.value, 0.0);
}

TEST(Oracle, PathLpEqualsKnapsackWithoutRequirements) {
  Rng rng(93);
  const auto inst = desk_instance(93, 4, 3, 0.2, 0.0);
  const auto table = build_index_table(inst);
  const auto rc = build_coeffs(inst, table, {0.0, 0.0, 0.0}, SpecialCase::two);
  int compared = 0;
  enumerate_paths(inst, {}, [&](const std::vector<int>& p) {
    const auto lp = solve_path_primal(inst, table, p);
    double best = -kInf;
    for (int v : rc.idle_set) {
      if (v != 0 && std::find(p.begin(), p.end(), v) == p.end()) continue;
      std::vector<ArcTerm> arcs;
      for (std::size_t k = 0; k + 1 < p.size(); ++k)
        arcs.push_back({rc.f(v, p[k], p[k + 1]), rc.min_time(p[k], p[k + 1]), rc.max_time(p[k], p[k + 1]),
                        rc.distance(p[k], p[k + 1]), -1});
      const auto fit = solve_fixed_path(arcs, inst.deadline());
      if (fit.feasible) best = std::max(best, fit.value + (v != 0 ? rc.idle_gain[v] * inst.deadline() : 0.0));
    }
    ASSERT_EQ(lp.feasible, std::isfinite(best));
    if (!lp.feasible) return;
    EXPECT_NEAR(lp.objective, best, 1e-8 * std::max(1.0, best));
    ++compared;
  });
  EXPECT_GT(compared, 10);
}

TEST(Oracle, SingleWaypointClosedForm) {
  const auto inst = desk_instance(94, 1, 1, 1.0, 0.0);
  const auto table = build_index_table(inst);
  const double p = inst.targets()[0].priority;
  const double node = table.node_coverage(1, 0);
  const double T = inst.deadline();
  double want = -kInf;
  for (double t1 : {inst.min_time(0, 1), inst.max_time(0, 1)})
    for (double t2 : {inst.min_time(1, 2), inst.max_time(1, 2)})
      want = std::max(want, p * (node * (T - t1 - t2) + table.coverage_rate(0, 1, 0) * t1 +
                                 table.coverage_rate(1, 2, 0) * t2));
  ASSERT_GT(node, 0.0);
  const auto o = oracle_primal(inst, table);
  ASSERT_TRUE(o.feasible);
  EXPECT_NEAR(o.objective, want, 1e-9 * want);
  EXPECT_NEAR(o.objective,
              p * node * (T - inst.min_time(0, 1) - inst.min_time(1, 2)) +
                  p * table.coverage_rate(0, 1, 0) * inst.min_time(0, 1) +
                  p * table.coverage_rate(1, 2, 0) * inst.min_time(1, 2),
              1e-9 * want);
}

TEST(Oracle, PrimalSolutionsValidate) {
  for (std::uint64_t seed = 95; seed < 100; ++seed) {
    const auto inst = desk_instance(seed, 4, 3, 0.2, 0.5);
    const auto table = build_index_table(inst);
    const auto o = oracle_primal(inst, table);
    if (!o.feasible) continue;
    const auto rep = validate_solution(inst, table, o.solution, {.enforce_coverage = true});
    EXPECT_TRUE(rep.ok()) << "seed " << seed;
  }
}

TEST(Repair, InsertsAWaypointForAnOrphanTarget) {
  const auto inst = desk_instance(101, 5, 4, 1.0, 0.2);
  const auto table = build_index_table(inst);
  // start from a route that visits a single waypoint
  for (int v = 1; v < inst.exit(); ++v) {
    const auto r = repair_route(inst, table, {0, v, inst.exit()});
    if (!r.feasible) continue;
    EXPECT_TRUE(validate_solution(inst, table, r.solution, {.enforce_coverage = true}).ok());
    EXPECT_EQ(r.solution.nodes.front(), 0);
    EXPECT_EQ(r.solution.nodes.back(), inst.exit());
  }
  const auto full = oracle_primal(inst, table);
  ASSERT_TRUE(full.feasible);
}

}  // namespace
}  // namespace mctp
