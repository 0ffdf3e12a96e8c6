#include <gtest/gtest.h>

#include "support.hpp"

namespace mctp {
namespace {

nlohmann::json minimal_doc() {
  return nlohmann::json::parse(R"({
    "waypoints": [
      {"id": 0, "x": 0, "y": 0, "a": 0, "b": 100},
      {"id": 1, "x": 4, "y": 0, "a": 0, "b": 100},
      {"id": 2, "x": 0, "y": 0, "a": 0, "b": 100}
    ],
    "targets": [
      {"id": 0, "x": 4, "y": 1, "sigma": 1, "priority": 2, "risk_radius": 2, "required": 1}
    ],
    "vehicle": {"rho": 1, "coverage_radius": 3, "speed_min": 1, "speed_max": 2,
                "energy_max": 1000, "priority": 1},
    "physics": {"beta": 1, "gamma": 1},
    "deadline": 100,
    "meta": {"seed": 5, "preset": "hand"}
  })");
}

TEST(Instance, MinimalDocument) {
  const auto res = instance_from_json(minimal_doc());
  EXPECT_EQ(res.instance.waypoint_count(), 1);
  EXPECT_EQ(res.instance.target_count(), 1);
  EXPECT_TRUE(res.removed.empty());
  EXPECT_EQ(res.instance.meta().seed, 5u);
}

TEST(Instance, TargetOnArcIsCleaned) {
  auto doc = minimal_doc();
  doc["targets"].push_back(
      {{"id", 7}, {"x", 2}, {"y", 0}, {"sigma", 1}, {"priority", 1}, {"risk_radius", 1}, {"required", 0}});
  const auto res = instance_from_json(doc);
  ASSERT_EQ(res.removed.size(), 1u);
  EXPECT_EQ(res.removed[0].id, 7);
  EXPECT_EQ(res.removed[0].reason, RemovalReason::on_arc);
  EXPECT_EQ(res.instance.target_count(), 1);
  EXPECT_THROW(instance_from_json(doc, {.clean = false}), InstanceError);
}

TEST(Instance, UncoverableTargetIsCleaned) {
  auto doc = minimal_doc();
  doc["targets"].push_back(
      {{"id", 3}, {"x", 50}, {"y", 50}, {"sigma", 1}, {"priority", 1}, {"risk_radius", 1}, {"required", 0}});
  const auto res = instance_from_json(doc);
  ASSERT_EQ(res.removed.size(), 1u);
  EXPECT_EQ(res.removed[0].reason, RemovalReason::uncoverable);
}

TEST(Instance, SchemaErrors) {
  auto bad_time = minimal_doc();
  bad_time["waypoints"][1]["a"] = "soon";
  EXPECT_THROW(instance_from_json(bad_time), InstanceError);
  auto missing = minimal_doc();
  missing.erase("vehicle");
  EXPECT_THROW(instance_from_json(missing), InstanceError);
  EXPECT_THROW(load_instance("{not json"), InstanceError);
  auto negative_id = minimal_doc();
  negative_id["targets"][0]["id"] = -1;
  EXPECT_THROW(instance_from_json(negative_id), InstanceError);
  auto speeds = minimal_doc();
  speeds["vehicle"]["speed_min"] = 3;
  EXPECT_THROW(instance_from_json(speeds), InstanceError);
}

TEST(Instance, RoundTrip) {
  const auto inst = testing::desk_instance(11, 5, 4);
  const auto back = load_instance(serialize(inst)).instance;
  EXPECT_EQ(back, inst);
  EXPECT_EQ(serialize(back), serialize(inst));
}

TEST(Instance, ArcSetAndDeadline) {
  const auto inst = testing::desk_instance(2, 4, 3);
  const int n = inst.waypoint_count();
  EXPECT_EQ(inst.arc_count(), (n + 1) * (n + 1) - 1);
  EXPECT_EQ(static_cast<int>(inst.arcs().size()), inst.arc_count());
  EXPECT_FALSE(inst.is_arc(0, inst.exit()));
  EXPECT_FALSE(inst.is_arc(inst.exit(), 1));
  EXPECT_TRUE(inst.is_arc(1, 0));
  EXPECT_FALSE(inst.is_path_arc(1, 0));
  double dmax = 0.0;
  for (auto [i, j] : inst.arcs()) dmax = std::max(dmax, inst.distance(i, j));
  EXPECT_DOUBLE_EQ(inst.deadline_for_scale(0.2), inst.arc_count() * dmax * 0.2);
}

TEST(Generator, DeterministicAndPresets) {
  const auto a = generate_instance(1, preset_params("small"));
  const auto b = generate_instance(1, preset_params("small"));
  EXPECT_EQ(serialize(a.instance), serialize(b.instance));
  EXPECT_EQ(a.instance.waypoint_count(), 9);
  EXPECT_DOUBLE_EQ(a.instance.vehicle().coverage_radius, 10.0);
  EXPECT_EQ(a.instance.target_count(), 10);
  const auto m = generate_instance(1, preset_params("medium"));
  EXPECT_EQ(m.instance.waypoint_count(), 12);
  EXPECT_DOUBLE_EQ(m.instance.vehicle().coverage_radius, 20.0);
  const auto l = generate_instance(1, preset_params("large"));
  EXPECT_EQ(l.instance.waypoint_count(), 15);
  EXPECT_DOUBLE_EQ(l.instance.vehicle().coverage_radius, 20.0);
  EXPECT_THROW(preset_params("huge"), std::invalid_argument);
}

TEST(Generator, TargetsAreScreenedAndInRange) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = generate_instance(seed, preset_params("small"));
    const auto& inst = g.instance;
    for (const auto& t : inst.targets()) {
      EXPECT_FALSE(screen_target(inst, t).has_value());
      EXPECT_GE(t.priority, 1.0);
      EXPECT_LE(t.priority, 5.0);
      bool near = false;
      for (int i = 1; i < inst.exit(); ++i)
        near = near || distance(inst.position(i), t.pos) <= inst.vehicle().coverage_radius;
      EXPECT_TRUE(near);
    }
  }
}

TEST(Energy, Examples) {
  EXPECT_DOUBLE_EQ(arc_energy(5, 2, 1, 1), 25.0);
  EXPECT_DOUBLE_EQ(arc_energy(5, 4, 0, 1), 4.0 * arc_energy(5, 2, 0, 1));
  EXPECT_DOUBLE_EQ(arc_energy(0, 3, 1, 1), 0.0);
}

TEST(IndexTable, MatchesDirectGeometry) {
  const auto inst = testing::desk_instance(4, 5, 6);
  const auto table = build_index_table(inst);
  const auto& v = inst.vehicle();
  for (auto [i, j] : inst.arcs())
    for (int w = 0; w < inst.target_count(); ++w) {
      const auto& t = inst.targets()[w];
      const auto c = arc_coverage_index(inst.position(i), inst.position(j), t.pos, v.rho, v.coverage_radius,
                                        inst.clearance());
      EXPECT_EQ(table.coverage(i, j, w), c);
      const auto r = arc_risk_index(inst.position(i), inst.position(j), t.pos, t.sigma, t.risk_radius,
                                    inst.clearance());
      EXPECT_EQ(table.risk(i, j, w), r);
      if (inst.is_arc(j, i)) EXPECT_NEAR(table.coverage_rate(i, j, w), table.coverage_rate(j, i, w), 1e-12);
    }
  for (int w = 0; w < inst.target_count(); ++w) {
    EXPECT_EQ(table.node_coverage(0, w), 0.0);
    EXPECT_EQ(table.node_coverage(inst.exit(), w), 0.0);
  }
}

TEST(IndexTable, FarTargetHasZeroRow) {
  auto doc = minimal_doc();
  doc["vehicle"]["coverage_radius"] = 1.5;
  doc["targets"][0]["x"] = 5;
  doc["targets"][0]["y"] = 1;
  const auto inst = instance_from_json(doc).instance;
  auto far = inst.targets();
  far.push_back({9, {2, 30}, 1.0, 1.0, 1.0, 0.0});
  const auto with_far = inst.with_targets(far);
  const auto table = build_index_table(with_far);
  for (auto [i, j] : with_far.arcs()) EXPECT_EQ(table.coverage_rate(i, j, 1), 0.0);
  for (int i = 0; i < with_far.node_count(); ++i) EXPECT_EQ(table.node_coverage(i, 1), 0.0);
}

// Hand-built route on the minimal instance: 0 -> 1 -> 2 with idle at 1.
PathSolution hand_route(const Instance& inst, const ArcIndexTable& table, double idle) {
  PathSolution sol;
  sol.nodes = {0, 1, 2};
  sol.arc_times = {3.0, 2.0};
  sol.idle = {{1, idle}};
  evaluate(inst, table, sol);
  sol.objective = route_objective(inst, sol.per_target_coverage);
  return sol;
}

TEST(Validate, FeasibleTour) {
  const auto inst = instance_from_json(minimal_doc()).instance;
  const auto table = build_index_table(inst);
  const auto sol = hand_route(inst, table, 5.0);
  const auto rep = validate_solution(inst, table, sol, {.enforce_coverage = true, .check_energy = true});
  EXPECT_TRUE(rep.ok());
  const Point2 w{4, 1};
  const double want = 5.0 * 1.0 + testing::quadrature_index({0, 0}, {4, 0}, w, 1.0, 3.0, 3.0) +
                      testing::quadrature_index({4, 0}, {0, 0}, w, 1.0, 3.0, 2.0);
  EXPECT_NEAR(sol.per_target_coverage[0], want, 1e-9);
}

TEST(Validate, DeadlineViolation) {
  const auto inst = instance_from_json(minimal_doc()).instance;
  const auto table = build_index_table(inst);
  const auto sol = hand_route(inst, table, 96.0);  // 3 + 2 + 96 = T + 1
  const auto rep = validate_solution(inst, table, sol);
  ASSERT_NE(rep.find("deadline"), nullptr);
  EXPECT_FALSE(rep.find("deadline")->pass);
  EXPECT_NEAR(rep.find("deadline")->slack, -1.0, 1e-12);
  EXPECT_FALSE(rep.ok());
}

TEST(Validate, CoverageShortfallNamesTarget) {
  auto doc = minimal_doc();
  doc["targets"][0]["required"] = 1e6;
  const auto inst = instance_from_json(doc).instance;
  const auto table = build_index_table(inst);
  const auto sol = hand_route(inst, table, 1.0);
  const auto rep = validate_solution(inst, table, sol, {.enforce_coverage = true});
  ASSERT_NE(rep.find("coverage[w=0]"), nullptr);
  EXPECT_FALSE(rep.find("coverage[w=0]")->pass);
  EXPECT_TRUE(validate_solution(inst, table, sol).ok());
}

TEST(Validate, StructureAndSpeed) {
  const auto inst = instance_from_json(minimal_doc()).instance;
  const auto table = build_index_table(inst);
  auto sol = hand_route(inst, table, 0.0);
  sol.arc_times[0] = 1.0;  // 4 units in 1 time: faster than speed_max 2
  EXPECT_FALSE(validate_solution(inst, table, sol).find("speed_bounds")->pass);
  PathSolution loop = sol;
  loop.nodes = {0, 1, 1, 2};
  loop.arc_times = {3, 1, 2};
  EXPECT_FALSE(validate_solution(inst, table, loop).structural_errors.empty());
  auto two_idle = hand_route(inst, table, 1.0);
  two_idle.idle.push_back({1, 1.0});
  two_idle.objective = route_objective(inst, route_coverage(table, two_idle));
  EXPECT_FALSE(validate_solution(inst, table, two_idle, {.single_idle = true}).ok());
}

TEST(Validate, JsonRoundTrip) {
  const auto inst = instance_from_json(minimal_doc()).instance;
  const auto table = build_index_table(inst);
  const auto sol = hand_route(inst, table, 2.5);
  const auto back = solution_from_json(nlohmann::json::parse(to_json(sol).dump()));
  EXPECT_EQ(back.nodes, sol.nodes);
  EXPECT_EQ(back.arc_times, sol.arc_times);
  EXPECT_EQ(back.idle, sol.idle);
  EXPECT_TRUE(validate_solution(inst, table, back).ok());
  EXPECT_THROW(solution_from_json(nlohmann::json::parse(R"({"nodes":[0,1,2]})")), InstanceError);
}

}  // namespace
}  // namespace mctp
