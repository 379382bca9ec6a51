#pragma once

#include "funkspace/error.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace funkspace::euclid {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;

// Relative margin for open-interior membership.
inline constexpr double kInteriorMargin = 1e-9;
// Relative tolerance for deciding that a hyperplane is active at a boundary point.
inline constexpr double kActiveTolerance = 1e-9;

/// The hyperplane {p : normal.p = offset}; the body lies in {p : normal.p < offset}.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;

  /// Normalizes `normal` and rescales `offset` accordingly.
  static Hyperplane from_unnormalized(const Vector& normal, double offset);

  /// offset - normal.x, positive on the body side.
  double gap(const Point& x) const { return offset - normal.dot(x); }
};

struct HalfspacePolytope {
  std::vector<Hyperplane> halfspaces;
};

/// {center + axes * diag(radii) * z : |z| < 1}; columns of `axes` are orthonormal.
struct Ellipsoid {
  Point center;
  Eigen::MatrixXd axes;
  Vector radii;
};

/// A body known only through its support function h(u) = sup u.p and the map
/// u -> argmax point on the boundary.
struct SupportOracle {
  std::function<double(const Vector&)> support;
  std::function<Point(const Vector&)> boundary_point;
};

struct BoundaryHit {
  Point point;
  double t_exit = 0.0;
  std::vector<Hyperplane> active;
  /// Polytope facet indices matching `active` (empty for smooth bodies).
  std::vector<std::size_t> active_facets;
};

class ConvexBody {
 public:
  enum class Kind { Polytope, Ellipsoid, Oracle };

  /// Throws ValidationError when `witness` is not interior.
  static ConvexBody polytope(std::vector<Hyperplane> halfspaces, const Point& witness);
  static ConvexBody ellipsoid(const Point& center, const Eigen::MatrixXd& axes, const Vector& radii);
  static ConvexBody ball(const Point& center, double radius);
  /// Axis-aligned box [lo, hi] as a polytope.
  static ConvexBody box(const Point& lo, const Point& hi);
  /// `scale` is the magnitude used for relative tolerances.
  static ConvexBody oracle(int dim, SupportOracle oracle, const Point& witness, double scale);

  Kind kind() const { return static_cast<Kind>(shape_.index()); }
  int dim() const { return dim_; }
  double scale() const { return scale_; }
  bool bounded() const { return bounded_; }
  const Point& witness() const { return witness_; }

  const HalfspacePolytope* as_polytope() const { return std::get_if<HalfspacePolytope>(&shape_); }
  const Ellipsoid* as_ellipsoid() const { return std::get_if<Ellipsoid>(&shape_); }
  const SupportOracle* as_oracle() const { return std::get_if<SupportOracle>(&shape_); }

  /// Image of the body under p -> A p + b. A must be invertible.
  ConvexBody transformed(const Eigen::MatrixXd& A, const Vector& b) const;

 private:
  ConvexBody() = default;

  std::variant<HalfspacePolytope, Ellipsoid, SupportOracle> shape_;
  int dim_ = 0;
  double scale_ = 1.0;
  bool bounded_ = true;
  Point witness_;
};

bool contains_interior(const ConvexBody& body, const Point& x);

/// offset - normal.x; throws PointOutsideHalfspace unless positive.
double distance_to_hyperplane(const Point& x, const Hyperplane& plane);

/// Nearest point of `plane` to `x`.
Point foot(const Point& x, const Hyperplane& plane);

/// First boundary point along x + t xi, t > 0. std::nullopt when the ray never
/// leaves the body.
std::optional<BoundaryHit> ray_exit(const ConvexBody& body, const Point& x, const Vector& xi);

std::vector<Hyperplane> supporting_hyperplanes_at(const ConvexBody& body, const Point& b);

/// h(u) = sup over the body of u.p. Throws Unbounded for recession directions.
double support_function(const ConvexBody& body, const Vector& u);

/// sup{t : x + t xi in body}; +infinity for recession directions.
double radial_function(const ConvexBody& body, const Point& x, const Vector& xi);

/// For oracle bodies: min over unit u of h(u) - u.x together with the
/// minimizing direction. Negative outside the body.
std::pair<double, Vector> oracle_min_gap(const ConvexBody& body, const Point& x);

}  // namespace funkspace::euclid
