#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mctp/mctp.hpp"

namespace mctp::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen_); }
  bool coin() { return integer(0, 1) == 1; }
  Point2 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Small generated instance on a compact field so that most arcs see some
/// target.
inline Instance desk_instance(std::uint64_t seed, int waypoints, int targets, double deadline_scale = 1.0,
                              double required = 1.0) {
  GeneratorParams p;
  p.waypoints = waypoints;
  p.targets = targets;
  p.field = 40.0;
  p.coverage_radius = 10.0;
  p.risk_radius = 4.0;
  p.required = required;
  p.deadline_scale = deadline_scale;
  p.preset = "desk";
  return generate_instance(seed, p).instance;
}

/// Random multipliers λ ≤ 0 of moderate size.
inline Multipliers random_lambda(Rng& rng, int W, double scale = 5.0) {
  Multipliers l(W);
  for (double& x : l) x = rng.coin() ? 0.0 : -rng.uniform(0.0, scale);
  return l;
}

/// Time-integral of factor / d² over the in-disk part of a straight pass
/// from a to b taking `duration`, by adaptive Gauss-Kronrod on each side of
/// the closest point.
inline double quadrature_index(Point2 a, Point2 b, Point2 w, double factor, double radius, double duration) {
  auto integrand = [&](double s) {
    const Point2 p = a + s * (b - a);
    const Point2 d = p - w;
    const double r2 = dot(d, d);
    return r2 <= radius * radius ? factor / r2 : 0.0;
  };
  const Point2 ab = b - a;
  const double s_star = std::clamp(dot(w - a, ab) / dot(ab, ab), 0.0, 1.0);
  // split at the disk boundary crossings so the integrand is smooth per piece
  std::vector<double> cuts{0.0, s_star, 1.0};
  const auto chord = chord_disk_intersect(a, b, w, radius);
  if (!chord.empty()) {
    cuts.push_back(distance(a, chord.p_start) / norm(ab));
    cuts.push_back(distance(a, chord.p_end) / norm(ab));
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    if (cuts[k + 1] > cuts[k])
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, cuts[k], cuts[k + 1], 15,
                                                                            1e-13);
  return total * duration;
}

}  // namespace mctp::testing
