#pragma once

// Problem data for single-vehicle coverage routing with an
// operational deadline: waypoints (with the two depots), targets, vehicle
// physics, plus file ingestion and random instance generation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mctp/geometry.hpp"

namespace mctp {

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Waypoint {
  int id = 0;
  Point2 pos;
  double open = 0.0;   // a_i
  double close = 0.0;  // b_i

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Target {
  int id = 0;
  Point2 pos;
  double sigma = 1.0;        // risk factor
  double priority = 1.0;     // p̄_w
  double risk_radius = 5.0;  // η̂_w
  double required = 1.0;     // t_w, minimum coverage

  friend bool operator==(const Target&, const Target&) = default;
};

struct Vehicle {
  double rho = 1.0;               // coverage factor
  double coverage_radius = 10.0;  // η̄
  double speed_min = 1.0;         // τ
  double speed_max = 10.0;        // τ̄
  double energy_max = 67500.0;
  double priority = 1.0;  // p̂

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

struct Physics {
  double beta = 1.0;   // rolling resistance
  double gamma = 1.0;  // aerodynamic drag

  friend bool operator==(const Physics&, const Physics&) = default;
};

struct InstanceMeta {
  std::uint64_t seed = 0;
  std::string preset;

  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

/// Energy spent on an arc of length d at constant speed v.
inline double arc_energy(double d, double v, double beta, double gamma) {
  if (d < 0.0 || !(v > 0.0)) throw std::invalid_argument("arc_energy: need d >= 0 and v > 0");
  return d * beta + gamma * d * v * v;
}

/// Visited-node set over ids 0..63.
struct NodeSet {
  std::uint64_t bits = 0;

  bool contains(int i) const { return (bits >> i) & 1u; }
  NodeSet with(int i) const { return {bits | (std::uint64_t{1} << i)}; }
  int size() const { return __builtin_popcountll(bits); }
  bool subset_of(NodeSet other) const { return (bits & ~other.bits) == 0; }

  friend bool operator==(NodeSet, NodeSet) = default;
};

inline constexpr int kMaxNodes = 64;

class Instance {
 public:
  Instance() = default;

  Instance(std::vector<Waypoint> waypoints, std::vector<Target> targets, Vehicle vehicle,
           Physics physics, double deadline, InstanceMeta meta = {})
      : waypoints_(std::move(waypoints)),
        targets_(std::move(targets)),
        vehicle_(vehicle),
        physics_(physics),
        deadline_(deadline),
        meta_(std::move(meta)) {
    check();
  }

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  const std::vector<Target>& targets() const { return targets_; }
  const Vehicle& vehicle() const { return vehicle_; }
  const Physics& physics() const { return physics_; }
  double deadline() const { return deadline_; }
  const InstanceMeta& meta() const { return meta_; }

  int node_count() const { return static_cast<int>(waypoints_.size()); }  // n + 2
  int waypoint_count() const { return node_count() - 2; }                   // n = |V⁰|
  int target_count() const { return static_cast<int>(targets_.size()); }
  int entry() const { return 0; }
  int exit() const { return node_count() - 1; }
  bool is_interior(int i) const { return i > 0 && i < exit(); }

  Point2 position(int node) const { return waypoints_[node].pos; }
  double distance(int i, int j) const { return mctp::distance(position(i), position(j)); }

  /// Membership in A = (V \ {n+1}) x V minus self loops and (0, n+1).
  bool is_arc(int i, int j) const {
    const int n1 = exit();
    if (i < 0 || j < 0 || i >= node_count() || j >= node_count()) return false;
    if (i == n1 || i == j) return false;
    return !(i == 0 && j == n1);
  }

  /// Arcs that can lie on a 0 -> n+1 path (never enter 0, never leave n+1).
  bool is_path_arc(int i, int j) const { return is_arc(i, j) && j != 0; }

  std::vector<std::pair<int, int>> arcs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < node_count(); ++i)
      for (int j = 0; j < node_count(); ++j)
        if (is_arc(i, j)) out.emplace_back(i, j);
    return out;
  }

  int arc_count() const {
    const long n1 = node_count() - 1;  // |V \ {n+1}|
    return static_cast<int>(n1 * (n1 + 1) - n1 - 1);
  }

  double min_time(int i, int j) const { return distance(i, j) / vehicle_.speed_max; }
  double max_time(int i, int j) const { return distance(i, j) / vehicle_.speed_min; }

  double max_arc_length() const {
    double m = 0.0;
    for (auto [i, j] : arcs()) m = std::max(m, distance(i, j));
    return m;
  }

  /// T := |A| * max d(i,j) * scale.
  double deadline_for_scale(double scale) const {
    return static_cast<double>(arc_count()) * max_arc_length() * scale;
  }

  /// Upper bound on the slowest traversal of any simple path: the sum of
  /// the n+1 largest maximum arc times. A deadline at or above it cannot
  /// bind.
  double slowest_path_bound() const {
    std::vector<double> times;
    for (int i = 0; i < node_count(); ++i)
      for (int j = 0; j < node_count(); ++j)
        if (is_path_arc(i, j)) times.push_back(max_time(i, j));
    std::sort(times.begin(), times.end(), std::greater<>());
    double total = 0.0;
    for (int k = 0; k < static_cast<int>(times.size()) && k < waypoint_count() + 1; ++k)
      total += times[k];
    return total;
  }

  /// ε_geo: 1e-9 of the bounding-box diagonal over all points.
  double clearance() const {
    if (waypoints_.empty()) return kDefaultClearance;
    double x0 = waypoints_[0].pos.x, x1 = x0, y0 = waypoints_[0].pos.y, y1 = y0;
    auto grow = [&](Point2 p) {
      x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    };
    for (const auto& w : waypoints_) grow(w.pos);
    for (const auto& t : targets_) grow(t.pos);
    const double diag = std::hypot(x1 - x0, y1 - y0);
    return diag > 0.0 ? 1e-9 * diag : kDefaultClearance;
  }

  Instance with_deadline(double deadline) const {
    Instance copy = *this;
    copy.deadline_ = deadline;
    copy.check();
    return copy;
  }

  Instance with_targets(std::vector<Target> targets) const {
    Instance copy = *this;
    copy.targets_ = std::move(targets);
    copy.check();
    return copy;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  void check() const {
    if (node_count() < 3) throw InstanceError("instance needs at least one waypoint besides the depots");
    if (node_count() > kMaxNodes) throw InstanceError("instance exceeds 64 nodes");
    for (int i = 0; i < node_count(); ++i) {
      if (waypoints_[i].id != i) throw InstanceError("waypoint ids must be 0..n+1 in order");
      if (!std::isfinite(waypoints_[i].pos.x) || !std::isfinite(waypoints_[i].pos.y))
        throw InstanceError("waypoint coordinates must be finite");
    }
    for (int i = 0; i < node_count(); ++i)
      for (int j = 0; j < node_count(); ++j)
        if (is_path_arc(i, j) && distance(i, j) == 0.0)
          throw InstanceError("zero-length arc " + std::to_string(i) + "->" + std::to_string(j));
    if (!(vehicle_.speed_min > 0.0) || vehicle_.speed_min > vehicle_.speed_max)
      throw InstanceError("speed bounds must satisfy 0 < speed_min <= speed_max");
    if (!(vehicle_.coverage_radius > 0.0) || vehicle_.rho < 0.0)
      throw InstanceError("vehicle coverage radius must be positive and rho nonnegative");
    if (!(deadline_ > 0.0)) throw InstanceError("deadline must be positive");
    for (const auto& t : targets_) {
      if (!std::isfinite(t.pos.x) || !std::isfinite(t.pos.y))
        throw InstanceError("target coordinates must be finite");
      if (t.required < 0.0) throw InstanceError("target coverage requirement must be >= 0");
      if (t.sigma < 0.0 || t.priority < 0.0 || !(t.risk_radius > 0.0))
        throw InstanceError("target factors must be nonnegative and radii positive");
    }
    for (std::size_t a = 0; a < targets_.size(); ++a)
      for (std::size_t b = a + 1; b < targets_.size(); ++b)
        if (targets_[a].id == targets_[b].id) throw InstanceError("duplicate target id");
  }

  std::vector<Waypoint> waypoints_;
  std::vector<Target> targets_;
  Vehicle vehicle_;
  Physics physics_;
  double deadline_ = 1.0;
  InstanceMeta meta_;
};

// ---------------------------------------------------------------------------
// Target screening

enum class RemovalReason { on_arc, uncoverable };

inline const char* to_string(RemovalReason r) {
  return r == RemovalReason::on_arc ? "target on arc" : "target not coverable";
}

struct RemovedTarget {
  int id = 0;
  RemovalReason reason = RemovalReason::uncoverable;
};

/// Why `t` cannot stay in the instance, if it cannot.
inline std::optional<RemovalReason> screen_target(const Instance& inst, const Target& t) {
  const double eps = inst.clearance();
  const auto& veh = inst.vehicle();
  bool coverable = false;
  for (auto [i, j] : inst.arcs()) {
    if (distance_to_segment(t.pos, inst.position(i), inst.position(j)) < eps)
      return RemovalReason::on_arc;
    if (!coverable && inst.is_path_arc(i, j)) {
      const auto idx = arc_coverage_index(inst.position(i), inst.position(j), t.pos, veh.rho,
                                          veh.coverage_radius, eps);
      coverable = idx.rate() > 0.0;
    }
  }
  for (int i = 1; i < inst.exit() && !coverable; ++i)
    coverable = point_index(inst.position(i), t.pos, veh.rho, veh.coverage_radius, eps) > 0.0;
  if (!coverable) return RemovalReason::uncoverable;
  return std::nullopt;
}

/// Drops targets that sit on an arc or cannot be covered from anywhere.
inline std::pair<Instance, std::vector<RemovedTarget>> clean_targets(const Instance& inst) {
  std::vector<Target> kept;
  std::vector<RemovedTarget> removed;
  for (const auto& t : inst.targets()) {
    if (auto why = screen_target(inst, t))
      removed.push_back({t.id, *why});
    else
      kept.push_back(t);
  }
  return {inst.with_targets(std::move(kept)), std::move(removed)};
}

// ---------------------------------------------------------------------------
// Structured-text (JSON) instance documents

struct LoadOptions {
  bool clean = true;
};

struct LoadResult {
  Instance instance;
  std::vector<RemovedTarget> removed;
};

namespace detail {

inline double number_at(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw InstanceError("schema: missing '" + std::string(key) + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) throw InstanceError("schema: '" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

inline int id_at(const nlohmann::json& obj, const std::string& where) {
  if (!obj.contains("id") || !obj.at("id").is_number_integer() || obj.at("id").get<long long>() < 0)
    throw InstanceError("schema: 'id' in " + where + " must be a nonnegative integer");
  return obj.at("id").get<int>();
}

inline const nlohmann::json& member(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw InstanceError("schema: missing top-level key '" + std::string(key) + "'");
  return doc.at(key);
}

}  // namespace detail

inline nlohmann::json to_json(const Instance& inst) {
  using nlohmann::json;
  json doc;
  json wps = json::array();
  for (const auto& w : inst.waypoints())
    wps.push_back({{"id", w.id}, {"x", w.pos.x}, {"y", w.pos.y}, {"a", w.open}, {"b", w.close}});
  json tgs = json::array();
  for (const auto& t : inst.targets())
    tgs.push_back({{"id", t.id},
                   {"x", t.pos.x},
                   {"y", t.pos.y},
                   {"sigma", t.sigma},
                   {"priority", t.priority},
                   {"risk_radius", t.risk_radius},
                   {"required", t.required}});
  const auto& v = inst.vehicle();
  doc["waypoints"] = std::move(wps);
  doc["targets"] = std::move(tgs);
  doc["vehicle"] = {{"rho", v.rho},
                    {"coverage_radius", v.coverage_radius},
                    {"speed_min", v.speed_min},
                    {"speed_max", v.speed_max},
                    {"energy_max", v.energy_max},
                    {"priority", v.priority}};
  doc["physics"] = {{"beta", inst.physics().beta}, {"gamma", inst.physics().gamma}};
  doc["deadline"] = inst.deadline();
  doc["meta"] = {{"seed", inst.meta().seed}, {"preset", inst.meta().preset}};
  return doc;
}

inline std::string serialize(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

inline LoadResult instance_from_json(const nlohmann::json& doc, LoadOptions opts = {}) {
  using detail::number_at;
  if (!doc.is_object()) throw InstanceError("schema: document must be an object");

  const auto& wps = detail::member(doc, "waypoints");
  if (!wps.is_array()) throw InstanceError("schema: 'waypoints' must be an array");
  std::vector<Waypoint> waypoints;
  for (std::size_t k = 0; k < wps.size(); ++k) {
    const std::string where = "waypoints[" + std::to_string(k) + "]";
    Waypoint w;
    w.id = detail::id_at(wps[k], where);
    w.pos = {number_at(wps[k], "x", where), number_at(wps[k], "y", where)};
    w.open = number_at(wps[k], "a", where);
    w.close = number_at(wps[k], "b", where);
    waypoints.push_back(w);
  }

  const auto& tgs = detail::member(doc, "targets");
  if (!tgs.is_array()) throw InstanceError("schema: 'targets' must be an array");
  std::vector<Target> targets;
  for (std::size_t k = 0; k < tgs.size(); ++k) {
    const std::string where = "targets[" + std::to_string(k) + "]";
    Target t;
    t.id = detail::id_at(tgs[k], where);
    t.pos = {number_at(tgs[k], "x", where), number_at(tgs[k], "y", where)};
    t.sigma = number_at(tgs[k], "sigma", where);
    t.priority = number_at(tgs[k], "priority", where);
    t.risk_radius = number_at(tgs[k], "risk_radius", where);
    t.required = number_at(tgs[k], "required", where);
    targets.push_back(t);
  }

  const auto& vj = detail::member(doc, "vehicle");
  Vehicle v;
  v.rho = number_at(vj, "rho", "vehicle");
  v.coverage_radius = number_at(vj, "coverage_radius", "vehicle");
  v.speed_min = number_at(vj, "speed_min", "vehicle");
  v.speed_max = number_at(vj, "speed_max", "vehicle");
  v.energy_max = number_at(vj, "energy_max", "vehicle");
  v.priority = number_at(vj, "priority", "vehicle");
  if (v.speed_min > v.speed_max) throw InstanceError("speed_min exceeds speed_max");

  const auto& pj = detail::member(doc, "physics");
  Physics phys{number_at(pj, "beta", "physics"), number_at(pj, "gamma", "physics")};

  const auto& dj = detail::member(doc, "deadline");
  if (!dj.is_number()) throw InstanceError("schema: 'deadline' must be a number");

  InstanceMeta meta;
  if (doc.contains("meta")) {
    const auto& mj = doc.at("meta");
    if (mj.contains("seed")) {
      if (!mj.at("seed").is_number_unsigned() && !mj.at("seed").is_number_integer())
        throw InstanceError("schema: meta.seed must be an integer");
      meta.seed = mj.at("seed").get<std::uint64_t>();
    }
    if (mj.contains("preset")) {
      if (!mj.at("preset").is_string()) throw InstanceError("schema: meta.preset must be a string");
      meta.preset = mj.at("preset").get<std::string>();
    }
  }

  Instance inst(std::move(waypoints), std::move(targets), v, phys, dj.get<double>(), meta);
  if (opts.clean) {
    auto [cleaned, removed] = clean_targets(inst);
    return {std::move(cleaned), std::move(removed)};
  }
  for (const auto& t : inst.targets())
    if (auto why = screen_target(inst, t))
      throw InstanceError(std::string(to_string(*why)) + ": target " + std::to_string(t.id));
  return {std::move(inst), {}};
}

inline LoadResult load_instance(const std::string& document, LoadOptions opts = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError(std::string("schema: malformed document: ") + e.what());
  }
  return instance_from_json(doc, opts);
}

// ---------------------------------------------------------------------------
// Random instance generation on a square field

struct GeneratorParams {
  int waypoints = 9;
  int targets = 10;
  double field = 100.0;
  double coverage_radius = 10.0;
  double risk_radius = 5.0;
  double rho = 1.0;
  double sigma = 1.0;
  double speed_min = 1.0;
  double speed_max = 10.0;
  double required = 1.0;
  double deadline_scale = 1.0;  // 1.0 non-binding, 0.1/0.2 restrictive
  double energy_max = 67500.0;
  int priority_max = 5;
  int max_draws = 10000;
  // Keep only targets within coverage range of some waypoint, so that
  // visiting every waypoint and idling can always meet the requirements.
  bool waypoint_coverable = true;
  std::string preset = "custom";
};

inline GeneratorParams preset_params(const std::string& name) {
  GeneratorParams p;
  p.preset = name;
  if (name == "small") {
    p.waypoints = 9, p.targets = 10, p.coverage_radius = 10.0;
  } else if (name == "medium") {
    p.waypoints = 12, p.targets = 11, p.coverage_radius = 20.0;
  } else if (name == "large") {
    p.waypoints = 15, p.targets = 12, p.coverage_radius = 20.0;
  } else if (name != "custom") {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return p;
}

struct GeneratedInstance {
  Instance instance;
  std::vector<RemovedTarget> removed;  // rejected draws, in draw order
};

namespace detail {

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Waypoints uniform on the field with a single depot at its center
/// (nodes 0 and n+1 share the location); targets are drawn until
/// `params.targets` of them are coverable, clear of every arc and (with
/// `waypoint_coverable`) within coverage range of some waypoint.
inline GeneratedInstance generate_instance(std::uint64_t seed, const GeneratorParams& params) {
  if (params.waypoints < 1 || params.targets < 1) throw std::invalid_argument("generate_instance: sizes must be >= 1");
  if (params.waypoints + 2 > kMaxNodes) throw std::invalid_argument("generate_instance: too many waypoints");
  if (!(params.deadline_scale > 0.0)) throw std::invalid_argument("generate_instance: deadline scale must be positive");

  std::mt19937_64 rng(seed);
  auto coord = [&] { return detail::unit(rng) * params.field; };

  const Point2 depot{params.field / 2.0, params.field / 2.0};
  std::vector<Waypoint> waypoints;
  waypoints.push_back({0, depot, 0.0, 0.0});
  for (int i = 1; i <= params.waypoints; ++i) waypoints.push_back({i, {coord(), coord()}, 0.0, 0.0});
  waypoints.push_back({params.waypoints + 1, depot, 0.0, 0.0});

  Vehicle veh;
  veh.rho = params.rho;
  veh.coverage_radius = params.coverage_radius;
  veh.speed_min = params.speed_min;
  veh.speed_max = params.speed_max;
  veh.energy_max = params.energy_max;
  veh.priority = 1.0;

  InstanceMeta meta{seed, params.preset};
  Instance skeleton(waypoints, {}, veh, Physics{}, 1.0, meta);
  const double deadline = skeleton.deadline_for_scale(params.deadline_scale);
  for (auto& w : waypoints) w.close = deadline;

  skeleton = Instance(waypoints, {}, veh, Physics{}, deadline, meta);
  std::vector<Target> targets;
  std::vector<RemovedTarget> removed;
  int next_id = 0;
  for (int draw = 0; draw < params.max_draws && static_cast<int>(targets.size()) < params.targets; ++draw) {
    Target t;
    t.id = next_id++;
    t.pos = {coord(), coord()};
    t.sigma = params.sigma;
    t.priority = static_cast<double>(1 + rng() % static_cast<std::uint64_t>(params.priority_max));
    t.risk_radius = params.risk_radius;
    t.required = params.required;
    auto why = screen_target(skeleton, t);
    if (!why && params.waypoint_coverable) {
      bool near = false;
      for (int i = 1; i < skeleton.exit() && !near; ++i)
        near = distance(skeleton.position(i), t.pos) <= params.coverage_radius;
      if (!near) why = RemovalReason::uncoverable;
    }
    if (why)
      removed.push_back({t.id, *why});
    else
      targets.push_back(t);
  }
  if (static_cast<int>(targets.size()) < params.targets)
    throw InstanceError("generate_instance: could not place enough coverable targets");

  return {Instance(std::move(waypoints), std::move(targets), veh, Physics{}, deadline, meta),
          std::move(removed)};
}

}  // namespace mctp
