#pragma once

#include "funkspace/error.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

// Hyperboloid model of the hyperbolic plane. Coordinates are stored as
// (p1, p2, p0) with the Minkowski form <u, v> = u1 v1 + u2 v2 - u0 v0.
namespace funkspace::hyp {

using Vec3 = Eigen::Vector3d;

inline constexpr double kInteriorMargin = 1e-9;

inline double minkowski(const Vec3& u, const Vec3& v) {
  return u(0) * v(0) + u(1) * v(1) - u(2) * v(2);
}

class HPoint {
 public:
  /// The origin (0, 0, 1).
  HPoint() : coords_(0.0, 0.0, 1.0) {}
  /// Validates <p, p> = -1 within 1e-10 and p0 > 0, then renormalizes.
  explicit HPoint(const Vec3& coords);
  /// Projects an arbitrary future-timelike vector onto the hyperboloid.
  static HPoint normalized(const Vec3& v);
  static HPoint origin() { return HPoint(); }
  static HPoint from_disk(const Eigen::Vector2d& u);
  /// The hyperboloid point with spatial coordinates (p1, p2).
  static HPoint from_spatial(const Eigen::Vector2d& p);
  /// Point at hyperbolic distance `r` from the origin in direction `angle`.
  static HPoint polar(double r, double angle);

  const Vec3& coords() const { return coords_; }
  Eigen::Vector2d to_disk() const;
  Eigen::Vector2d to_klein() const;

 private:
  struct Trusted {};
  HPoint(const Vec3& coords, Trusted) : coords_(coords) {}
  Vec3 coords_;
};

struct HTangent {
  HPoint base;
  Vec3 vec;
};

/// The complete geodesic {p : <p, n> = 0}; the inside halfplane is <p, n> < 0.
class HGeodesicLine {
 public:
  /// Requires a spacelike unit normal, <n, n> = 1 within 1e-10.
  explicit HGeodesicLine(const Vec3& normal);
  static HGeodesicLine normalized(const Vec3& normal);
  /// Geodesic with the given ideal endpoints on the unit circle. The kept
  /// side contains the counterclockwise arc from `a` to `b`.
  static HGeodesicLine from_ideal_endpoints(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

  const Vec3& normal() const { return normal_; }
  HGeodesicLine flipped() const { return HGeodesicLine(-normal_); }
  /// Ideal endpoints on the unit circle.
  std::pair<Eigen::Vector2d, Eigen::Vector2d> ideal_endpoints() const;

 private:
  Vec3 normal_;
};

struct GeodesicDomain {
  std::vector<HGeodesicLine> boundaries;
  HPoint witness = HPoint::origin();

  /// Throws ValidationError unless the witness is strictly inside every halfplane.
  static GeodesicDomain make(std::vector<HGeodesicLine> boundaries, const HPoint& witness);
};

/// 4x4-free representation of an isometry: a 3x3 matrix preserving the form
/// and the upper sheet.
struct Isometry {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Identity();

  static Isometry rotation(double angle);
  /// Boost of rapidity `rapidity` along the p1 axis.
  static Isometry boost(double rapidity);
  Isometry operator*(const Isometry& other) const { return {matrix * other.matrix}; }

  HPoint apply(const HPoint& p) const { return HPoint::normalized(matrix * p.coords()); }
  HTangent apply(const HTangent& t) const { return {apply(t.base), matrix * t.vec}; }
  HGeodesicLine apply(const HGeodesicLine& l) const {
    return HGeodesicLine::normalized(matrix * l.normal());
  }
  GeodesicDomain apply(const GeodesicDomain& d) const;
};

double h_dist(const HPoint& p, const HPoint& q);

/// base cosh s + vec sinh s. Requires <vec, vec> = 1 and <base, vec> = 0.
HPoint exp_map(const HTangent& t, double s);

struct LogResult {
  HTangent tangent;
  double length = 0.0;
};

/// Unit tangent at p toward q and the distance. Throws CoincidentPoints.
LogResult log_map(const HPoint& p, const HPoint& q);

/// arcsinh(<p, n>): negative on the inside, |value| is the distance to the line.
double signed_dist_to_geodesic(const HPoint& p, const HGeodesicLine& line);

HPoint project_to_geodesic(const HPoint& p, const HGeodesicLine& line);

/// Unit tangent at p pointing toward its projection on the line.
HTangent normal_field(const HPoint& p, const HGeodesicLine& line);

struct RayHit {
  HPoint point;
  double s = 0.0;
};

/// Where the geodesic ray exp_x(s xi), s > 0, meets the line, if it does.
std::optional<RayHit> ray_hit_geodesic(const HPoint& x, const HTangent& xi,
                                       const HGeodesicLine& line);

bool domain_contains(const GeodesicDomain& domain, const HPoint& p);

/// Unit tangent at p at the given angle from the frame obtained by
/// Gram-Schmidt on the p1 and p2 axes (the disk-chart axes at the origin).
HTangent unit_tangent(const HPoint& p, double angle);

/// Velocity of the unit-speed geodesic t -> exp_map(t0, s) at parameter s.
Vec3 geodesic_velocity(const HTangent& t0, double s);

}  // namespace funkspace::hyp
