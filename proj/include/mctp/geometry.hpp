#pragma once

// Chord/disk geometry and the per-unit-time risk and coverage indices that
// are accrued while a vehicle travels a straight arc near a target.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mctp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Euclidean distance from `p` to the closed segment [a, b].
inline double distance_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + s * ab);
}

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateSegment : public GeometryError {
 public:
  DegenerateSegment() : GeometryError("degenerate segment: endpoints coincide") {}
};

class TargetOnArc : public GeometryError {
 public:
  TargetOnArc() : GeometryError("target on arc") {}
};

class TargetAtWaypoint : public GeometryError {
 public:
  TargetAtWaypoint() : GeometryError("target coincident with waypoint") {}
};

/// Default absolute clearance used when the caller has no instance scale.
inline constexpr double kDefaultClearance = 1e-9;

struct ChordIntersection {
  enum class Kind { empty, segment };

  Kind kind = Kind::empty;
  Point2 p_start;
  Point2 p_end;
  double frac = 0.0;  // |p_start p_end| / |a b|

  bool empty() const { return kind == Kind::empty; }
};

/// Sub-segment of [a, b] inside the closed disk (center, radius), ordered
/// from a toward b. Tangent contact (a single point) is reported as empty.
inline ChordIntersection chord_disk_intersect(Point2 a, Point2 b, Point2 center,
                                              double radius) {
  if (a == b) throw DegenerateSegment();
  if (!(radius > 0.0)) throw std::invalid_argument("chord_disk_intersect: radius must be positive");

  // |a + s(b-a) - c|^2 = r^2  ->  A s^2 + 2 B s + C = 0
  const Point2 ab = b - a;
  const Point2 ca = a - center;
  const double qa = dot(ab, ab);
  const double qb = dot(ca, ab);
  const double qc = dot(ca, ca) - radius * radius;
  const double disc = qb * qb - qa * qc;
  if (disc <= 0.0) return {};

  const double root = std::sqrt(disc);
  // Numerically stable pair of roots.
  const double q = -(qb + std::copysign(root, qb));
  double s1 = q / qa;
  double s2 = (q != 0.0) ? qc / q : -s1;
  if (s1 > s2) std::swap(s1, s2);

  const double lo = std::max(s1, 0.0);
  const double hi = std::min(s2, 1.0);
  if (!(hi > lo)) return {};

  ChordIntersection out;
  out.kind = ChordIntersection::Kind::segment;
  out.p_start = lo == 0.0 ? a : a + lo * ab;
  out.p_end = hi == 1.0 ? b : a + hi * ab;
  out.frac = hi - lo;
  return out;
}

struct ArcIndex {
  double per_time_index = 0.0;  // factor * theta / (sin(theta) |w p| |w q|)
  double frac = 0.0;            // in-disk fraction of the arc length

  /// Index accrued per unit travel time on the whole arc.
  double rate() const { return per_time_index * frac; }

  friend bool operator==(const ArcIndex&, const ArcIndex&) = default;
};

namespace detail {

// theta / sin(theta), with the series near zero where the ratio is 0/0.
inline double theta_over_sin(double theta) {
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    return 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
  }
  return theta / std::sin(theta);
}

}  // namespace detail

/// Chord integral of factor / d(h, w)^2 over the part of [i, j] within
/// `radius` of w, expressed per unit of time spent on the whole arc:
/// the accrued amount equals per_time_index * frac * t_ij.
inline ArcIndex chord_index(Point2 i, Point2 j, Point2 w, double factor, double radius,
                            double clearance = kDefaultClearance) {
  if (i == j) throw DegenerateSegment();
  if (factor < 0.0) throw std::invalid_argument("chord_index: factor must be nonnegative");
  if (distance_to_segment(w, i, j) < clearance) throw TargetOnArc();

  const ChordIntersection chord = chord_disk_intersect(i, j, w, radius);
  if (chord.empty() || factor == 0.0) return {0.0, chord.frac};

  const Point2 u = chord.p_start - w;
  const Point2 v = chord.p_end - w;
  const double theta = std::atan2(std::abs(cross(u, v)), dot(u, v));
  const double index = factor * detail::theta_over_sin(theta) / (norm(u) * norm(v));
  return {index, chord.frac};
}

/// r_ijw: risk exposure per unit time on arc (i, j) from target w.
inline ArcIndex arc_risk_index(Point2 i, Point2 j, Point2 w, double sigma, double risk_radius,
                               double clearance = kDefaultClearance) {
  return chord_index(i, j, w, sigma, risk_radius, clearance);
}

/// c_ijw: surveillance accrued per unit time on arc (i, j) over target w.
inline ArcIndex arc_coverage_index(Point2 i, Point2 j, Point2 w, double rho,
                                   double coverage_radius,
                                   double clearance = kDefaultClearance) {
  return chord_index(i, j, w, rho, coverage_radius, clearance);
}

/// Index per unit time while loitering at p: factor / d^2 inside the closed
/// disk of `radius`, zero outside.
inline double point_index(Point2 p, Point2 w, double factor, double radius,
                          double clearance = kDefaultClearance) {
  if (factor < 0.0) throw std::invalid_argument("point_index: factor must be nonnegative");
  const double d = distance(p, w);
  if (d < clearance) throw TargetAtWaypoint();
  if (d > radius) return 0.0;
  return factor / (d * d);
}

}  // namespace mctp
