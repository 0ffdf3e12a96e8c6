#include <gtest/gtest.h>

#include "support.hpp"

namespace mctp {
namespace {

using testing::desk_instance;
using testing::Rng;

CutCoeffs cut_of(std::vector<double> slope, double intercept) {
  CutCoeffs c;
  c.slope = std::move(slope);
  c.intercept = intercept;
  c.alpha.assign(c.slope.size(), 0.0);
  return c;
}

TEST(Master, FeasibleCenterIsItsOwnProjection) {
  const std::vector<CutCoeffs> cuts{cut_of({1.0, -2.0}, 3.0)};
  const Multipliers center{-1.0, -0.5};  // cut = 3 - 1 + 1 = 3
  const auto m = solve_master(cuts, center, 4.0);
  ASSERT_EQ(m.status, MasterStatus::feasible);
  EXPECT_NEAR(m.lambda[0], -1.0, 1e-12);
  EXPECT_NEAR(m.lambda[1], -0.5, 1e-12);
}

TEST(Master, EmptyLevelSet) {
  // slopes ≤ 0 on λ ≤ 0 keep the cut ≥ its intercept
  const std::vector<CutCoeffs> cuts{cut_of({-1.0, -2.0}, 5.0)};
  EXPECT_EQ(solve_master(cuts, {0.0, 0.0}, 4.9).status, MasterStatus::infeasible);
  EXPECT_EQ(solve_master(cuts, {0.0, 0.0}, 5.0).status, MasterStatus::feasible);
  EXPECT_THROW(solve_master({}, {0.0}, 1.0), std::invalid_argument);
}

TEST(Master, ProjectionOptimality) {
  Rng rng(61);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int W = 5;
    std::vector<CutCoeffs> cuts;
    for (int k = rng.integer(1, 12); k > 0; --k) {
      std::vector<double> s(W);
      for (double& x : s) x = rng.uniform(-10, 3);
      cuts.push_back(cut_of(s, rng.uniform(0, 50)));
    }
    const auto center = testing::random_lambda(rng, W, 10.0);
    double model_at_center = -kInf;
    for (const auto& c : cuts) model_at_center = std::max(model_at_center, c(center));
    const double f_lev = model_at_center - rng.uniform(0, 30);
    const auto m = solve_master(cuts, center, f_lev);
    if (m.status == MasterStatus::infeasible) {
      // the LP screen says no λ ≤ 0 reaches f_lev; a coarse search agrees
      for (int probe = 0; probe < 200; ++probe) {
        const auto p = testing::random_lambda(rng, W, 50.0);
        double model = -kInf;
        for (const auto& c : cuts) model = std::max(model, c(p));
        EXPECT_GT(model, f_lev - 1e-9);
      }
      continue;
    }
    ++feasible;
    EXPECT_LE(m.kkt_residual, 1e-8);
    const auto& l = m.lambda;
    for (double x : l) EXPECT_LE(x, 0.0);
    for (const auto& c : cuts) EXPECT_LE(c(l), f_lev + 1e-8 * std::max(1.0, std::abs(f_lev)));
    // stationarity with the reported multipliers, checked here from scratch
    std::vector<double> g(W);
    for (int w = 0; w < W; ++w) g[w] = l[w] - center[w];
    const int L = static_cast<int>(cuts.size());
    for (std::size_t r = 0; r < m.active.size(); ++r) {
      EXPECT_GE(m.multipliers[r], -1e-10);
      const int k = m.active[r];
      for (int w = 0; w < W; ++w) g[w] += m.multipliers[r] * (k < L ? cuts[k].slope[w] : (w == k - L ? 1.0 : 0.0));
    }
    for (int w = 0; w < W; ++w) EXPECT_NEAR(g[w], 0.0, 1e-7);
    // variational inequality: no feasible point is closer to the center
    for (int probe = 0; probe < 50; ++probe) {
      Multipliers p(W);
      const double s = rng.uniform(0, 1);
      for (int w = 0; w < W; ++w) p[w] = std::min(0.0, l[w] + s * rng.uniform(-5, 5));
      bool ok = true;
      for (const auto& c : cuts) ok = ok && c(p) <= f_lev;
      if (!ok) continue;
      double ip = 0.0;
      for (int w = 0; w < W; ++w) ip += (center[w] - l[w]) * (p[w] - l[w]);
      EXPECT_LE(ip, 1e-7);
    }
  }
  EXPECT_GT(feasible, 50);
}

TEST(Bundle, LevelArithmetic) {
  DualState st;
  st.lb = 0.0;
  st.ub = 10.0;
  st.phi = 0.5;
  EXPECT_DOUBLE_EQ(st.level(), 5.0);
  EXPECT_TRUE(bundle_converged(99.995, 100.0, 1e-4));
  EXPECT_FALSE(bundle_converged(99.9, 100.0, 1e-4));
  EXPECT_TRUE(bundle_converged(-0.5e-4, 0.0, 1e-4));
}

TEST(Bundle, OptionValidation) {
  const auto inst = desk_instance(1, 3, 2);
  EXPECT_THROW(run_dual(inst, SpecialCase::one, {.phi = 1.0}), std::invalid_argument);
  EXPECT_THROW(run_dual(inst, SpecialCase::one, {.tol = 0.0}), std::invalid_argument);
}

TEST(Bundle, NoRequirementsKeepZeroMultipliers) {
  const auto inst = desk_instance(62, 4, 3, 1.0, 0.0);
  const auto res = run_dual(inst, SpecialCase::one);
  ASSERT_EQ(res.status, DualStatus::converged);
  EXPECT_DOUBLE_EQ(res.dual_bound, res.initial_bound);
  for (double l : res.best_lambda) EXPECT_EQ(l, 0.0);
}

void check_run(const Instance& inst, SpecialCase kind, const DualResult& res) {
  ASSERT_EQ(res.status, DualStatus::converged) << to_string(res.status);
  EXPECT_LE(res.dual_bound - res.lower_bound, 1e-4 * std::max(1.0, std::abs(res.dual_bound)));
  EXPECT_LE(res.dual_bound, res.initial_bound);
  const auto& tr = res.state.trace;
  ASSERT_FALSE(tr.empty());
  EXPECT_EQ(tr.front().master, "initial");
  for (std::size_t k = 1; k < tr.size(); ++k) {
    EXPECT_LE(tr[k].ub, tr[k - 1].ub);
    EXPECT_GE(tr[k].lb, tr[k - 1].lb);
    const double lev = res.state.phi * tr[k - 1].lb + (1 - res.state.phi) * tr[k - 1].ub;
    EXPECT_NEAR(tr[k].f_lev, lev, 1e-9 * std::max(1.0, std::abs(lev)));
  }
  const auto table = build_index_table(inst);
  const auto primal = oracle_primal(inst, table);
  if (primal.feasible) EXPECT_GE(res.dual_bound, primal.objective - 1e-6);
  if (res.best_primal) {
    const auto rep = validate_solution(inst, table, *res.best_primal, {.enforce_coverage = true});
    EXPECT_TRUE(rep.ok());
    EXPECT_LE(res.best_primal->objective, res.dual_bound + 1e-6);
  }
  const auto again = evaluate_relaxation(inst, table, res.best_lambda, kind);
  EXPECT_NEAR(again.f, res.dual_bound, 1e-9 * std::max(1.0, std::abs(again.f)));
}

TEST(Bundle, ConvergesWithWeakDualityCaseOne) {
  for (std::uint64_t seed : {63u, 64u, 65u}) {
    const auto inst = desk_instance(seed, 5, 4, 1.0, 0.5);
    check_run(inst, SpecialCase::one, run_dual(inst, SpecialCase::one));
  }
}

TEST(Bundle, ConvergesWithWeakDualityCaseTwo) {
  for (std::uint64_t seed : {66u, 67u, 68u}) {
    const auto inst = desk_instance(seed, 5, 4, 0.2, 0.3);
    check_run(inst, SpecialCase::two, run_dual(inst, SpecialCase::two));
  }
}

TEST(Bundle, ThreadsGiveTheSameBound) {
  const auto inst = desk_instance(69, 5, 4, 1.0, 0.5);
  const auto a = run_dual(inst, SpecialCase::one, {.threads = 1});
  const auto b = run_dual(inst, SpecialCase::one, {.threads = 3});
  EXPECT_EQ(a.dual_bound, b.dual_bound);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.best_lambda, b.best_lambda);
}

TEST(Bundle, LimitsAndInfeasibility) {
  const auto inst = desk_instance(70, 5, 4, 1.0, 0.5);
  const auto capped = run_dual(inst, SpecialCase::one, {.iter_limit = 1});
  EXPECT_TRUE(capped.status == DualStatus::iteration_limit || capped.status == DualStatus::converged);
  EXPECT_LE(capped.iterations, 1);
  const auto timed = run_dual(inst, SpecialCase::one, {.time_limit = 0.0});
  EXPECT_EQ(timed.status, DualStatus::time_limit);
  const auto tiny = inst.with_deadline(1e-3);
  EXPECT_EQ(run_dual(tiny, SpecialCase::two).status, DualStatus::relaxation_infeasible);
}

TEST(Bundle, TraceJson) {
  TraceRow row{3, std::numeric_limits<double>::quiet_NaN(), 1.0, 2.0, 1.5, "infeasible", 0.25};
  const auto j = to_json(row, false);
  EXPECT_TRUE(j["f"].is_null());
  EXPECT_EQ(j["master"], "infeasible");
  EXPECT_FALSE(j.contains("wall"));
  EXPECT_TRUE(to_json(row).contains("wall"));
}

}  // namespace
}  // namespace mctp
