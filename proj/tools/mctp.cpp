// mctp: generate instances, compute Lagrangian dual bounds, check routes.
//
//   mctp gen    --preset small --seed 3 --case I --out inst.json
//   mctp solve  --instance inst.json --case I --trace trace.jsonl --solution route.json
//   mctp verify --instance inst.json --solution route.json
//
// Exit codes: 0 ok / converged, 1 verification failed, 2 limit reached,
// 3 infeasible, 4 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mctp/mctp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitLimit = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInput = 4;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

mctp::LoadResult read_instance(const std::string& path) {
  auto res = mctp::load_instance(read_file(path));
  for (const auto& r : res.removed)
    std::cerr << "warning: target " << r.id << " removed (" << mctp::to_string(r.reason) << ")\n";
  return res;
}

struct GenConfig {
  std::string preset = "small";
  std::uint64_t seed = 1;
  std::string kind = "I";
  double deadline_scale = 0.0;  // 0: 1.0 for case I, 0.1 for case II
  int waypoints = 0;
  int targets = 0;
  double coverage_radius = 0.0;
  double required = -1.0;
  std::string out;
};

int cmd_gen(const GenConfig& c) {
  auto params = mctp::preset_params(c.preset);
  const auto kind = mctp::parse_case(c.kind);
  params.deadline_scale = c.deadline_scale > 0.0 ? c.deadline_scale : (kind == mctp::SpecialCase::one ? 1.0 : 0.1);
  if (c.waypoints > 0) params.waypoints = c.waypoints;
  if (c.targets > 0) params.targets = c.targets;
  if (c.coverage_radius > 0.0) params.coverage_radius = c.coverage_radius;
  if (c.required >= 0.0) params.required = c.required;
  const auto g = mctp::generate_instance(c.seed, params);
  for (const auto& r : g.removed)
    std::cerr << "warning: target draw " << r.id << " rejected (" << mctp::to_string(r.reason) << ")\n";
  write_text(c.out, mctp::serialize(g.instance));
  return kExitOk;
}

struct SolveConfig {
  std::string instance;
  std::string kind = "I";
  double phi = 0.5;
  double tol = 1e-4;
  double time_limit = 7200.0;
  int iter_limit = 200;
  int threads = 0;
  bool oracle = false;
  std::string ratio_mode = "slope";
  std::string out;
  std::string trace;
  std::string solution;
  std::string meta;
};

nlohmann::json witness_json(const mctp::RelaxationResult& r) {
  return {{"vbar", r.vbar}, {"nodes", r.nodes}, {"times", r.times}, {"idle", r.idle}};
}

int exit_code_for(mctp::DualStatus s) {
  switch (s) {
    case mctp::DualStatus::converged: return kExitOk;
    case mctp::DualStatus::iteration_limit:
    case mctp::DualStatus::time_limit: return kExitLimit;
    case mctp::DualStatus::relaxation_infeasible:
    case mctp::DualStatus::primal_infeasible: return kExitInfeasible;
  }
  return kExitFail;
}

int cmd_solve(const SolveConfig& c) {
  const auto loaded = read_instance(c.instance);
  const auto& inst = loaded.instance;
  const auto kind = mctp::parse_case(c.kind);

  mctp::DualOptions opts;
  opts.phi = c.phi;
  opts.tol = c.tol;
  opts.time_limit = c.time_limit;
  opts.iter_limit = c.iter_limit;
  opts.threads = c.threads > 0 ? c.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  opts.mode = mctp::parse_key_mode(c.ratio_mode);

  mctp::DualResult res;
  try {
    res = mctp::run_dual(inst, kind, opts);
  } catch (const mctp::RelaxationError& e) {
    throw InputError(e.what());
  }

  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json rec;
  rec["instance"] = {{"preset", inst.meta().preset}, {"seed", inst.meta().seed},
                     {"waypoints", inst.waypoint_count()}, {"targets", inst.target_count()},
                     {"deadline", inst.deadline()}};
  rec["case"] = mctp::to_string(kind);
  rec["ratio_mode"] = mctp::to_string(opts.mode);
  rec["status"] = mctp::to_string(res.status);
  rec["initial_bound"] = num(res.initial_bound);
  rec["dual_bound"] = num(res.dual_bound);
  rec["lower_bound"] = num(res.lower_bound > mctp::kNoLowerBound ? res.lower_bound : NAN);
  rec["iterations"] = res.iterations;
  rec["improvement"] = num(std::isfinite(res.initial_bound) && std::isfinite(res.dual_bound)
                               ? (res.initial_bound - res.dual_bound) / std::max(1.0, std::abs(res.initial_bound))
                               : NAN);
  rec["best_lambda"] = res.best_lambda;
  rec["witness"] = res.witness.feasible ? witness_json(res.witness) : nlohmann::json(nullptr);
  rec["primal"] = res.best_primal ? nlohmann::json{{"objective", res.best_primal->objective},
                                                   {"nodes", res.best_primal->nodes}}
                                  : nlohmann::json(nullptr);
  rec["removed_targets"] = static_cast<int>(loaded.removed.size());

  if (c.oracle) {
    try {
      const auto table = mctp::build_index_table(inst);
      const auto op = mctp::oracle_primal(inst, table);
      if (op.feasible)
        rec["oracle"] = {{"primal", op.objective},
                         {"gap", num((res.dual_bound - op.objective) / std::max(1.0, std::abs(op.objective)))}};
      else
        rec["oracle"] = {{"primal", nullptr}, {"infeasible", true}};
    } catch (const mctp::BudgetExceeded& e) {
      rec["oracle"] = {{"error", e.what()}};
    }
  }
  write_text(c.out, rec.dump() + "\n");

  if (!c.trace.empty()) {
    std::string rows;
    // wall times go to the meta file so the trace stays reproducible
    for (const auto& row : res.state.trace) rows += mctp::to_json(row, false).dump() + "\n";
    write_text(c.trace, rows);
  }
  if (!c.solution.empty()) {
    const auto table = mctp::build_index_table(inst);
    std::optional<mctp::PathSolution> sol = res.best_primal;
    if (!sol && res.witness.feasible) sol = mctp::witness_solution(inst, table, res.witness);
    if (sol) {
      mctp::evaluate(inst, table, *sol);
      write_text(c.solution, mctp::to_json(*sol).dump(2) + "\n");
    }
  }
  nlohmann::json meta{{"wall_initial_s", res.wall_initial}, {"wall_total_s", res.wall_total},
                      {"threads", opts.threads}};
  std::cerr << "meta " << meta.dump() << "\n";
  if (!c.meta.empty()) {
    std::vector<double> walls;
    for (const auto& row : res.state.trace) walls.push_back(row.wall);
    meta["trace_wall_s"] = walls;
    write_text(c.meta, meta.dump() + "\n");
  }
  return exit_code_for(res.status);
}

struct VerifyConfig {
  std::string instance;
  std::string solution;
  bool enforce_coverage = false;
  bool single_idle = false;
  bool energy = false;
  bool time_windows = false;
};

int cmd_verify(const VerifyConfig& c) {
  const auto loaded = read_instance(c.instance);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(c.solution));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("solution file: ") + e.what());
  }
  const auto sol = mctp::solution_from_json(doc);
  const auto table = mctp::build_index_table(loaded.instance);
  mctp::ValidateOptions vo;
  vo.enforce_coverage = c.enforce_coverage;
  vo.single_idle = c.single_idle;
  vo.check_energy = c.energy;
  vo.check_time_windows = c.time_windows;
  const auto rep = mctp::validate_solution(loaded.instance, table, sol, vo);
  std::cout << mctp::to_json(rep).dump(2) << "\n";
  return rep.ok() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage routing with an operational deadline: Lagrangian dual bounds"};
  app.require_subcommand(1);

  GenConfig gen;
  auto* g = app.add_subcommand("gen", "generate a random instance");
  g->add_option("--preset", gen.preset, "small, medium, large or custom")
      ->check(CLI::IsMember({"small", "medium", "large", "custom"}));
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--case", gen.kind, "I (non-binding deadline) or II (binding)")->check(CLI::IsMember({"I", "II"}));
  g->add_option("--deadline-scale", gen.deadline_scale, "T = |A| max d * scale (default 1.0 for I, 0.1 for II)");
  g->add_option("--waypoints", gen.waypoints, "override the preset waypoint count");
  g->add_option("--targets", gen.targets, "override the preset target count");
  g->add_option("--coverage-radius", gen.coverage_radius, "override the preset coverage radius");
  g->add_option("--required", gen.required, "coverage requirement per target");
  g->add_option("--out", gen.out, "output file (default stdout)");

  SolveConfig solve;
  auto* s = app.add_subcommand("solve", "run the level bundle method on an instance");
  s->add_option("instance,--instance", solve.instance, "instance file")->required();
  s->add_option("--case", solve.kind, "I or II")->check(CLI::IsMember({"I", "II"}));
  s->add_option("--phi", solve.phi, "level parameter weight in (0,1)")->check(CLI::Range(0.0, 1.0));
  s->add_option("--tol", solve.tol, "relative stopping tolerance")->check(CLI::PositiveNumber);
  s->add_option("--time-limit", solve.time_limit, "wall-clock limit in seconds")->check(CLI::PositiveNumber);
  s->add_option("--iter-limit", solve.iter_limit, "bundle iteration limit")->check(CLI::NonNegativeNumber);
  s->add_option("--threads", solve.threads, "worker threads for the per-candidate fan-out (0 = all cores)");
  s->add_flag("--oracle", solve.oracle, "also solve the primal by enumeration and report the gap");
  s->add_option("--ratio-mode", solve.ratio_mode, "case II ordering key: slope or per-distance")
      ->check(CLI::IsMember({"slope", "per-distance"}));
  s->add_option("--out", solve.out, "result file (default stdout)");
  s->add_option("--trace", solve.trace, "per-iteration trace file (JSON lines)");
  s->add_option("--solution", solve.solution, "write the best route found");
  s->add_option("--meta", solve.meta, "write wall-clock timings here");

  VerifyConfig verify;
  auto* v = app.add_subcommand("verify", "check a route against an instance");
  v->add_option("instance,--instance", verify.instance, "instance file")->required();
  v->add_option("solution,--solution", verify.solution, "route file")->required();
  v->add_flag("--enforce-coverage", verify.enforce_coverage, "require every target's coverage level");
  v->add_flag("--single-idle", verify.single_idle, "allow idling at one waypoint only");
  v->add_flag("--energy", verify.energy, "check the energy budget");
  v->add_flag("--time-windows", verify.time_windows, "check waypoint time windows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_solve(solve);
    if (*v) return cmd_verify(verify);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const mctp::InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitInput;
}
