#include "funkspace/convex_body.hpp"

#include "funkspace/numerics.hpp"

#include <cmath>
#include <limits>

namespace funkspace::euclid {

namespace {

void require_dim(const ConvexBody& body, const Point& x) {
  if (x.size() != body.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point has dimension " + std::to_string(x.size()) +
                                                  ", body has " + std::to_string(body.dim()));
  }
}

void require_unit(const Vector& xi) {
  if (!(std::abs(xi.norm() - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::InvalidArgument, "direction must be a unit vector");
  }
}

void require_interior(const ConvexBody& body, const Point& x) {
  if (!contains_interior(body, x)) throw Error(ErrorCode::PointNotInterior, "point not interior");
}

// Probe directions on S^{d-1}: a uniform circle in 2D, a Fibonacci sphere in
// 3D and signed coordinate axes plus diagonals above that.
const std::vector<Vector>& probe_directions(int dim) {
  static thread_local std::vector<std::vector<Vector>> cache(16);
  auto& dirs = cache.at(static_cast<std::size_t>(dim));
  if (!dirs.empty()) return dirs;
  if (dim == 2) {
    constexpr int n = 128;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * M_PI * i / n;
      dirs.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
  } else if (dim == 3) {
    constexpr int n = 256;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double r = std::sqrt(1.0 - z * z);
      dirs.push_back(Eigen::Vector3d(r * std::cos(golden * i), r * std::sin(golden * i), z));
    }
  } else {
    for (int i = 0; i < dim; ++i) {
      for (double s : {1.0, -1.0}) {
        Vector e = Vector::Zero(dim);
        e(i) = s;
        dirs.push_back(e);
      }
    }
    for (int mask = 0; mask < (1 << std::min(dim, 8)); ++mask) {
      Vector e(dim);
      for (int i = 0; i < dim; ++i) e(i) = ((mask >> (i % 8)) & 1) ? 1.0 : -1.0;
      dirs.push_back(e.normalized());
    }
  }
  return dirs;
}

double polytope_scale(const std::vector<Hyperplane>& hs) {
  double s = 0.0;
  for (const auto& h : hs) {
    s = std::max(s, std::abs(h.offset));
    s = std::max(s, h.normal.cwiseAbs().maxCoeff());
  }
  return s > 0.0 ? s : 1.0;
}

Eigen::MatrixXd normal_matrix(const HalfspacePolytope& poly, int dim) {
  Eigen::MatrixXd N(static_cast<Eigen::Index>(poly.halfspaces.size()), dim);
  for (std::size_t i = 0; i < poly.halfspaces.size(); ++i) {
    N.row(static_cast<Eigen::Index>(i)) = poly.halfspaces[i].normal.transpose();
  }
  return N;
}

Eigen::VectorXd gaps_at(const HalfspacePolytope& poly, const Point& x) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(poly.halfspaces.size()));
  for (std::size_t i = 0; i < poly.halfspaces.size(); ++i) {
    g(static_cast<Eigen::Index>(i)) = poly.halfspaces[i].gap(x);
  }
  return g;
}

// Coordinates of x in the ellipsoid frame, scaled so the body is the unit ball.
Vector to_unit_ball(const Ellipsoid& e, const Vector& v) {
  return (e.axes.transpose() * v).cwiseQuotient(e.radii);
}

double ellipsoid_gauge(const Ellipsoid& e, const Point& x) {
  return to_unit_ball(e, x - e.center).norm();
}

Hyperplane ellipsoid_tangent(const Ellipsoid& e, const Point& b) {
  const Vector z = to_unit_ball(e, b - e.center);
  const Vector grad = e.axes * z.cwiseQuotient(e.radii);
  Hyperplane h;
  h.normal = grad.normalized();
  h.offset = h.normal.dot(b);
  return h;
}

}  // namespace

Hyperplane Hyperplane::from_unnormalized(const Vector& normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "hyperplane normal must be nonzero");
  }
  return Hyperplane{normal / n, offset / n};
}

ConvexBody ConvexBody::polytope(std::vector<Hyperplane> halfspaces, const Point& witness) {
  if (halfspaces.empty()) throw Error(ErrorCode::ValidationError, "polytope needs a halfspace");
  const auto dim = static_cast<int>(witness.size());
  if (dim < 1) throw Error(ErrorCode::ValidationError, "empty witness");
  for (const auto& h : halfspaces) {
    if (h.normal.size() != dim) throw Error(ErrorCode::DimensionMismatch, "halfspace normal");
    if (!(std::abs(h.normal.norm() - 1.0) <= 1e-12)) {
      throw Error(ErrorCode::ValidationError, "halfspace normals must be unit vectors");
    }
  }
  ConvexBody body;
  body.dim_ = dim;
  body.scale_ = polytope_scale(halfspaces);
  body.shape_ = HalfspacePolytope{std::move(halfspaces)};
  body.witness_ = witness;
  if (!contains_interior(body, witness)) {
    throw Error(ErrorCode::ValidationError, "witness point is not interior to the polytope");
  }
  const auto& poly = std::get<HalfspacePolytope>(body.shape_);
  const Eigen::MatrixXd N = normal_matrix(poly, dim);
  const Eigen::VectorXd g = gaps_at(poly, witness);
  body.bounded_ = true;
  for (int i = 0; i < dim && body.bounded_; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector e = Vector::Zero(dim);
      e(i) = s;
      if (numerics::maximize_linear(N, g, e).status ==
          numerics::LinearProgramResult::Status::Unbounded) {
        body.bounded_ = false;
        break;
      }
    }
  }
  return body;
}

ConvexBody ConvexBody::ellipsoid(const Point& center, const Eigen::MatrixXd& axes,
                                 const Vector& radii) {
  const auto dim = static_cast<int>(center.size());
  if (axes.rows() != dim || axes.cols() != dim || radii.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch, "ellipsoid frame");
  }
  if (!(radii.minCoeff() > 0.0)) throw Error(ErrorCode::ValidationError, "radii must be positive");
  if (!(axes.transpose() * axes).isApprox(Eigen::MatrixXd::Identity(dim, dim), 1e-10)) {
    throw Error(ErrorCode::ValidationError, "ellipsoid axes must be orthonormal");
  }
  ConvexBody body;
  body.dim_ = dim;
  body.shape_ = Ellipsoid{center, axes, radii};
  body.scale_ = std::max(center.size() ? center.cwiseAbs().maxCoeff() : 0.0, radii.maxCoeff());
  body.witness_ = center;
  body.bounded_ = true;
  return body;
}

ConvexBody ConvexBody::ball(const Point& center, double radius) {
  const auto d = center.size();
  return ellipsoid(center, Eigen::MatrixXd::Identity(d, d), Vector::Constant(d, radius));
}

ConvexBody ConvexBody::box(const Point& lo, const Point& hi) {
  if (lo.size() != hi.size()) throw Error(ErrorCode::DimensionMismatch, "box corners");
  std::vector<Hyperplane> hs;
  const auto d = lo.size();
  for (Eigen::Index i = 0; i < d; ++i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    hs.push_back({e, hi(i)});
    hs.push_back({-e, -lo(i)});
  }
  return polytope(std::move(hs), 0.5 * (lo + hi));
}

ConvexBody ConvexBody::oracle(int dim, SupportOracle oracle, const Point& witness, double scale) {
  if (witness.size() != dim) throw Error(ErrorCode::DimensionMismatch, "oracle witness");
  if (!oracle.support || !oracle.boundary_point) {
    throw Error(ErrorCode::ValidationError, "oracle needs support and boundary maps");
  }
  ConvexBody body;
  body.dim_ = dim;
  body.shape_ = std::move(oracle);
  body.scale_ = scale > 0.0 ? scale : 1.0;
  body.witness_ = witness;
  body.bounded_ = true;
  if (!contains_interior(body, witness)) {
    throw Error(ErrorCode::ValidationError, "witness point is not interior to the oracle body");
  }
  return body;
}

ConvexBody ConvexBody::transformed(const Eigen::MatrixXd& A, const Vector& b) const {
  if (A.rows() != dim_ || A.cols() != dim_ || b.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "affine map");
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw Error(ErrorCode::InvalidArgument, "affine map is singular");
  const Point w = A * witness_ + b;
  if (const auto* poly = as_polytope()) {
    const Eigen::MatrixXd inv_t = lu.inverse().transpose();
    std::vector<Hyperplane> hs;
    for (const auto& h : poly->halfspaces) {
      const Vector n = inv_t * h.normal;
      hs.push_back(Hyperplane::from_unnormalized(n, h.offset + n.dot(b)));
    }
    return polytope(std::move(hs), w);
  }
  if (const auto* e = as_ellipsoid()) {
    const Eigen::MatrixXd M = A * e->axes * e->radii.asDiagonal();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
    return ellipsoid(A * e->center + b, svd.matrixU(), svd.singularValues());
  }
  const auto& o = std::get<SupportOracle>(shape_);
  SupportOracle image;
  const Eigen::MatrixXd At = A.transpose();
  image.support = [support = o.support, At, b](const Vector& u) {
    const Vector v = At * u;
    const double n = v.norm();
    return u.dot(b) + n * support(v / n);
  };
  image.boundary_point = [bp = o.boundary_point, A, At, b](const Vector& u) -> Point {
    const Vector v = At * u;
    return A * bp(v.normalized()) + b;
  };
  return oracle(dim_, std::move(image), w, scale_ * A.norm() + b.cwiseAbs().maxCoeff());
}

std::pair<double, Vector> oracle_min_gap(const ConvexBody& body, const Point& x) {
  const auto* o = body.as_oracle();
  if (o == nullptr) throw Error(ErrorCode::InvalidArgument, "not an oracle body");
  require_dim(body, x);
  double best = std::numeric_limits<double>::infinity();
  Vector best_u;
  for (const auto& u : probe_directions(body.dim())) {
    const double gap = o->support(u) - u.dot(x);
    if (gap < best) {
      best = gap;
      best_u = u;
    }
  }
  // Refine: maximize -(h(u) - u.x), whose gradient is -(boundary_point(u) - x).
  auto objective = [o, &x](const Vector& u, Vector& grad) {
    grad = x - o->boundary_point(u);
    return -(o->support(u) - u.dot(x));
  };
  const auto refined = numerics::ascend_on_sphere(objective, best_u, 1e-12, 200);
  if (-refined.value < best) {
    best = -refined.value;
    best_u = refined.u;
  }
  return {best, best_u};
}

bool contains_interior(const ConvexBody& body, const Point& x) {
  require_dim(body, x);
  if (!x.allFinite()) return false;
  const double margin = kInteriorMargin * body.scale();
  if (const auto* poly = body.as_polytope()) {
    for (const auto& h : poly->halfspaces) {
      if (!(h.normal.dot(x) < h.offset - margin)) return false;
    }
    return true;
  }
  if (const auto* e = body.as_ellipsoid()) {
    // The margin applies to the gauge |z| of the pulled-back point.
    return ellipsoid_gauge(*e, x) < 1.0 - kInteriorMargin;
  }
  return oracle_min_gap(body, x).first > margin;
}

double distance_to_hyperplane(const Point& x, const Hyperplane& plane) {
  if (x.size() != plane.normal.size()) throw Error(ErrorCode::DimensionMismatch, "hyperplane");
  const double d = plane.gap(x);
  if (!(d > 0.0)) throw Error(ErrorCode::PointOutsideHalfspace, "point not inside the halfspace");
  return d;
}

Point foot(const Point& x, const Hyperplane& plane) {
  if (x.size() != plane.normal.size()) throw Error(ErrorCode::DimensionMismatch, "hyperplane");
  return x + plane.gap(x) * plane.normal;
}

namespace {

// With u = xi + w and w orthogonal to xi, the exit time is the minimum of the
// convex function T(w) = h(u) - u.x, whose gradient is the projection of
// boundary_point(u) - x. Minimized by nested bisection on directional slopes.
class OracleExit {
 public:
  OracleExit(const SupportOracle& o, const Point& x, const Vector& xi) : o_(o), x_(x), xi_(xi) {
    const auto d = xi.size();
    Eigen::MatrixXd frame(d, d);
    frame.col(0) = xi;
    frame.rightCols(d - 1).setZero();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    for (Eigen::Index j = 1; j < d; ++j) basis_.push_back(q.col(j));
  }

  std::pair<double, Vector> solve() const {
    const Vector w = argmin(Vector::Zero(xi_.size()), 0);
    const Vector u = xi_ + w;
    return {o_.support(u) - u.dot(x_), u.normalized()};
  }

 private:
  double slope(const Vector& w, const Vector& e) const {
    return e.dot(o_.boundary_point((xi_ + w).normalized()) - x_);
  }

  Vector argmin(const Vector& w0, std::size_t level) const {
    if (level == basis_.size()) return w0;
    const Vector& e = basis_[level];
    auto inner_slope = [&](double c) { return slope(argmin(w0 + c * e, level + 1), e); };
    double lo = -1.0, hi = 1.0;
    while (inner_slope(lo) > 0.0) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e12) throw Error(ErrorCode::NumericFailure, "oracle ray exit not bracketed");
    }
    while (inner_slope(hi) < 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) throw Error(ErrorCode::NumericFailure, "oracle ray exit not bracketed");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (inner_slope(mid) < 0.0 ? lo : hi) = mid;
      if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
    }
    return argmin(w0 + 0.5 * (lo + hi) * e, level + 1);
  }

  const SupportOracle& o_;
  const Point& x_;
  const Vector& xi_;
  std::vector<Vector> basis_;
};

std::pair<double, Vector> oracle_exit(const SupportOracle& o, const Point& x, const Vector& xi) {
  return OracleExit(o, x, xi).solve();
}

}  // namespace

std::optional<BoundaryHit> ray_exit(const ConvexBody& body, const Point& x, const Vector& xi) {
  require_dim(body, x);
  require_dim(body, xi);
  require_unit(xi);
  require_interior(body, x);

  BoundaryHit hit;
  if (const auto* poly = body.as_polytope()) {
    double t_min = std::numeric_limits<double>::infinity();
    for (const auto& h : poly->halfspaces) {
      const double rate = h.normal.dot(xi);
      if (rate > 0.0) t_min = std::min(t_min, h.gap(x) / rate);
    }
    if (!std::isfinite(t_min)) return std::nullopt;
    hit.t_exit = t_min;
    hit.point = x + t_min * xi;
    const double tol = kActiveTolerance * body.scale();
    for (std::size_t i = 0; i < poly->halfspaces.size(); ++i) {
      const auto& h = poly->halfspaces[i];
      if (std::abs(h.gap(hit.point)) <= tol) {
        hit.active.push_back(h);
        hit.active_facets.push_back(i);
      }
    }
    return hit;
  }
  if (const auto* e = body.as_ellipsoid()) {
    const Vector z = to_unit_ball(*e, x - e->center);
    const Vector w = to_unit_ball(*e, xi);
    const double a = w.squaredNorm();
    const double half_b = z.dot(w);
    const double c = z.squaredNorm() - 1.0;
    const double root = std::sqrt(half_b * half_b - a * c);
    // Positive root of a t^2 + 2 half_b t + c = 0 in a cancellation-free form.
    hit.t_exit = half_b > 0.0 ? -c / (half_b + root) : (root - half_b) / a;
    hit.point = x + hit.t_exit * xi;
    hit.active.push_back(ellipsoid_tangent(*e, hit.point));
    return hit;
  }
  const auto* o = body.as_oracle();
  const auto [t_exit, u] = oracle_exit(*o, x, xi);
  hit.t_exit = t_exit;
  hit.point = x + t_exit * xi;
  hit.active.push_back({u, body.as_oracle()->support(u)});
  return hit;
}

std::vector<Hyperplane> supporting_hyperplanes_at(const ConvexBody& body, const Point& b) {
  require_dim(body, b);
  const double tol = kActiveTolerance * body.scale();
  std::vector<Hyperplane> out;
  if (const auto* poly = body.as_polytope()) {
    bool outside = false;
    for (const auto& h : poly->halfspaces) {
      const double g = h.gap(b);
      if (g < -tol) outside = true;
      if (std::abs(g) <= tol) out.push_back(h);
    }
    if (out.empty() || outside) throw Error(ErrorCode::PointNotOnBoundary, "not a boundary point");
    return out;
  }
  if (const auto* e = body.as_ellipsoid()) {
    if (!(std::abs(ellipsoid_gauge(*e, b) - 1.0) <= kActiveTolerance)) {
      throw Error(ErrorCode::PointNotOnBoundary, "not on the ellipsoid boundary");
    }
    out.push_back(ellipsoid_tangent(*e, b));
    return out;
  }
  const auto [gap, u] = oracle_min_gap(body, b);
  if (!(std::abs(gap) <= tol)) throw Error(ErrorCode::PointNotOnBoundary, "not on the boundary");
  out.push_back({u, body.as_oracle()->support(u)});
  return out;
}

double support_function(const ConvexBody& body, const Vector& u) {
  require_dim(body, u);
  require_unit(u);
  if (const auto* poly = body.as_polytope()) {
    const Eigen::MatrixXd N = normal_matrix(*poly, body.dim());
    const Eigen::VectorXd g = gaps_at(*poly, body.witness());
    const auto lp = numerics::maximize_linear(N, g, u);
    if (lp.status == numerics::LinearProgramResult::Status::Unbounded) {
      throw Error(ErrorCode::Unbounded, "support function is infinite in this direction");
    }
    return u.dot(body.witness()) + lp.value;
  }
  if (const auto* e = body.as_ellipsoid()) {
    return u.dot(e->center) + (e->radii.asDiagonal() * e->axes.transpose() * u).norm();
  }
  return body.as_oracle()->support(u);
}

double radial_function(const ConvexBody& body, const Point& x, const Vector& xi) {
  const auto hit = ray_exit(body, x, xi);
  return hit ? hit->t_exit : std::numeric_limits<double>::infinity();
}

}  // namespace funkspace::euclid
