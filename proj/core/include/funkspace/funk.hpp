#pragma once

#include "funkspace/convex_body.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace funkspace::funk {

using euclid::BoundaryHit;
using euclid::ConvexBody;
using euclid::Hyperplane;
using euclid::Point;
using euclid::Vector;

enum class Formulation { F1, F2Raw, F2, F3, Hilbert };

std::string_view to_string(Formulation f);

struct FunkValue {
  double value = 0.0;
  /// Unclamped supremum for F2; equal to `value` otherwise.
  double raw = 0.0;
  Formulation formulation = Formulation::F1;
  std::variant<std::monostate, Hyperplane, BoundaryHit> attained_at;
  /// Polytope facet realizing the F2 maximum.
  std::optional<std::size_t> facet;
};

/// Piecewise-linear path through `knots`, uniform speed per segment.
struct PiecewisePath {
  std::vector<Point> knots;
};

struct F2Options {
  int random_starts = 32;
  double grad_tol = 1e-10;
  unsigned seed = 0x5eedu;
};

struct F3Options {
  int knot_count = 5;
  int restarts = 8;
  double tolerance = 1e-10;
  unsigned seed = 0xf3u;
  /// Perturbation size for restarts, relative to |y - x|.
  double perturbation = 0.15;
};

/// Ray-exit form: log of the ratio of distances from x and y to b(x, y).
FunkValue funk_f1(const ConvexBody& body, const Point& x, const Point& y);

/// Supremum over supporting hyperplanes of log(d(x, pi) / d(y, pi)). Exact
/// facet maximum on polytopes, multistart ascent on smooth bodies.
FunkValue funk_f2(const ConvexBody& body, const Point& x, const Point& y,
                  const F2Options& options = {});

/// Tautological Finsler norm 1 / r(x, xi/|xi|) * |xi|.
double finsler_norm(const ConvexBody& body, const Point& x, const Vector& xi);

/// max(0, sup over supporting hyperplanes of <normal, xi> / d(x, pi)). Exact on
/// polytopes, optimized on smooth bodies.
double finsler_norm_dual(const ConvexBody& body, const Point& x, const Vector& xi);

/// Integral of the Finsler norm along the path; absolute tolerance per segment.
double funk_path_length(const ConvexBody& body, const PiecewisePath& path,
                        double segment_tol = 1e-9);

/// Infimum of path length over paths with `knot_count` movable interior knots.
FunkValue funk_f3(const ConvexBody& body, const Point& x, const Point& y,
                  const F3Options& options = {});

/// Best path found by funk_f3.
PiecewisePath funk_f3_path(const ConvexBody& body, const Point& x, const Point& y,
                           const F3Options& options = {});

FunkValue hilbert(const ConvexBody& body, const Point& x, const Point& y);

/// log of the cross ratio of x, y, b(x, y), b(y, x), computed from the two hits.
double cross_ratio_log(const ConvexBody& body, const Point& x, const Point& y);

struct Line {
  Point origin;
  Vector direction;  // unit

  Point at(double t) const { return origin + t * direction; }
};

struct Derivatives {
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Closed-form first and second derivatives of t -> log(d(x, pi) / d(s(t), pi)).
Derivatives derivative_check(const Point& x, const Line& line, double t, const Hyperplane& plane);

struct ConvexityProfile {
  std::vector<double> values;
  std::vector<double> second_differences;
  bool all_nonneg = true;
};

/// Samples F(x, s(t)) (or F(s(t), x) when `reversed`) on `t_grid` and reports
/// centered second differences. `all_nonneg` uses the threshold -1e-9.
ConvexityProfile convexity_profile(const ConvexBody& body, const Point& x, const Line& line,
                                   const std::vector<double>& t_grid, bool reversed = false);

/// Point m on the segment [p, q] with H(p, m) = H(m, q), by bisection.
Point hilbert_midpoint(const ConvexBody& body, const Point& p, const Point& q,
                       double tol = 1e-10);

}  // namespace funkspace::funk
