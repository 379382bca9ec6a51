#include "funkspace/hyperbolic.hpp"

#include <cmath>

namespace funkspace::hyp {

namespace {

constexpr double kFormTolerance = 1e-10;

double sheet_scale(const Vec3& v) { return std::max(1.0, v.squaredNorm()); }

}  // namespace

HPoint::HPoint(const Vec3& coords) {
  if (!coords.allFinite() || !(coords(2) > 0.0) ||
      !(std::abs(minkowski(coords, coords) + 1.0) <= kFormTolerance * sheet_scale(coords))) {
    throw Error(ErrorCode::InvalidHPoint, "point is not on the upper hyperboloid sheet");
  }
  coords_ = normalized(coords).coords_;
}

HPoint HPoint::normalized(const Vec3& v) {
  const double q = -minkowski(v, v);
  if (!v.allFinite() || !(q > 0.0) || !(v(2) > 0.0)) {
    throw Error(ErrorCode::InvalidHPoint, "vector is not future timelike");
  }
  Vec3 p = v / std::sqrt(q);
  p(2) = std::sqrt(1.0 + p(0) * p(0) + p(1) * p(1));
  return HPoint(p, Trusted{});
}

HPoint HPoint::from_spatial(const Eigen::Vector2d& p) {
  if (!p.allFinite()) throw Error(ErrorCode::InvalidHPoint, "non-finite coordinates");
  return HPoint(Vec3(p.x(), p.y(), std::sqrt(1.0 + p.squaredNorm())), Trusted{});
}

HPoint HPoint::from_disk(const Eigen::Vector2d& u) {
  const double r2 = u.squaredNorm();
  if (!u.allFinite() || !(r2 < 1.0)) {
    throw Error(ErrorCode::InvalidHPoint, "Poincare disk point must satisfy |u| < 1");
  }
  const double k = 1.0 / (1.0 - r2);
  return normalized(Vec3(2.0 * u(0) * k, 2.0 * u(1) * k, (1.0 + r2) * k));
}

HPoint HPoint::polar(double r, double angle) {
  const double sh = std::sinh(r);
  return normalized(Vec3(sh * std::cos(angle), sh * std::sin(angle), std::cosh(r)));
}

Eigen::Vector2d HPoint::to_disk() const {
  return Eigen::Vector2d(coords_(0), coords_(1)) / (1.0 + coords_(2));
}

Eigen::Vector2d HPoint::to_klein() const {
  return Eigen::Vector2d(coords_(0), coords_(1)) / coords_(2);
}

HGeodesicLine::HGeodesicLine(const Vec3& normal) {
  if (!normal.allFinite() ||
      !(std::abs(minkowski(normal, normal) - 1.0) <= kFormTolerance * sheet_scale(normal))) {
    throw Error(ErrorCode::InvalidArgument, "geodesic normal must be spacelike unit");
  }
  normal_ = normal / std::sqrt(minkowski(normal, normal));
}

HGeodesicLine HGeodesicLine::normalized(const Vec3& normal) {
  const double q = minkowski(normal, normal);
  if (!normal.allFinite() || !(q > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "geodesic normal must be spacelike");
  }
  return HGeodesicLine(normal / std::sqrt(q));
}

HGeodesicLine HGeodesicLine::from_ideal_endpoints(const Eigen::Vector2d& a,
                                                  const Eigen::Vector2d& b) {
  if (!(std::abs(a.norm() - 1.0) <= 1e-9) || !(std::abs(b.norm() - 1.0) <= 1e-9)) {
    throw Error(ErrorCode::ValidationError, "ideal endpoints must lie on the unit circle");
  }
  const Eigen::Vector2d an = a.normalized();
  const Eigen::Vector2d bn = b.normalized();
  if ((an - bn).norm() < 1e-9) throw Error(ErrorCode::ValidationError, "ideal endpoints coincide");
  const Vec3 ja(an(0), an(1), -1.0);
  const Vec3 jb(bn(0), bn(1), -1.0);
  Vec3 n = ja.cross(jb);
  const double theta_a = std::atan2(an(1), an(0));
  double sweep = std::atan2(bn(1), bn(0)) - theta_a;
  while (sweep <= 0.0) sweep += 2.0 * M_PI;
  const double mid = theta_a + 0.5 * sweep;
  if (minkowski(Vec3(std::cos(mid), std::sin(mid), 1.0), n) > 0.0) n = -n;
  return normalized(n);
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> HGeodesicLine::ideal_endpoints() const {
  const Eigen::Vector2d n12(normal_(0), normal_(1));
  const double m2 = n12.squaredNorm();
  const Eigen::Vector2d mid = n12 * (normal_(2) / m2);
  const double half = std::sqrt(std::max(0.0, 1.0 - normal_(2) * normal_(2) / m2));
  const Eigen::Vector2d perp = Eigen::Vector2d(-n12(1), n12(0)) / std::sqrt(m2);
  Eigen::Vector2d a = mid + half * perp;
  Eigen::Vector2d b = mid - half * perp;
  if (minkowski(from_ideal_endpoints(a, b).normal(), normal_) < 0.0) std::swap(a, b);
  return {a, b};
}

GeodesicDomain GeodesicDomain::make(std::vector<HGeodesicLine> boundaries, const HPoint& witness) {
  GeodesicDomain d{std::move(boundaries), witness};
  if (!domain_contains(d, witness)) {
    throw Error(ErrorCode::ValidationError, "witness is not inside every boundary halfplane");
  }
  return d;
}

Isometry Isometry::rotation(double angle) {
  Isometry g;
  const double c = std::cos(angle), s = std::sin(angle);
  g.matrix << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return g;
}

Isometry Isometry::boost(double rapidity) {
  Isometry g;
  const double c = std::cosh(rapidity), s = std::sinh(rapidity);
  g.matrix << c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c;
  return g;
}

GeodesicDomain Isometry::apply(const GeodesicDomain& d) const {
  GeodesicDomain out;
  out.witness = apply(d.witness);
  for (const auto& b : d.boundaries) out.boundaries.push_back(apply(b));
  return out;
}

double h_dist(const HPoint& p, const HPoint& q) {
  const double c = -minkowski(p.coords(), q.coords());
  if (c < 1.0 + 1e-8) {
    // Chord form: <p - q, p - q> = 2 (c - 1) = 4 sinh^2(d / 2).
    const Vec3 diff = p.coords() - q.coords();
    const double chord2 = std::max(0.0, minkowski(diff, diff));
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  return std::acosh(c);
}

namespace {

void validate_tangent(const HTangent& t) {
  const Vec3& b = t.base.coords();
  const double tol = 1e-9 * sheet_scale(b);
  if (!t.vec.allFinite() || !(std::abs(minkowski(t.vec, t.vec) - 1.0) <= tol) ||
      !(std::abs(minkowski(b, t.vec)) <= tol)) {
    throw Error(ErrorCode::InvalidTangent, "tangent must be unit and orthogonal to its base");
  }
}

}  // namespace

HPoint exp_map(const HTangent& t, double s) {
  validate_tangent(t);
  if (s == 0.0) return t.base;
  return HPoint::normalized(t.base.coords() * std::cosh(s) + t.vec * std::sinh(s));
}

Vec3 geodesic_velocity(const HTangent& t, double s) {
  return t.base.coords() * std::sinh(s) + t.vec * std::cosh(s);
}

LogResult log_map(const HPoint& p, const HPoint& q) {
  const double d = h_dist(p, q);
  const Vec3& pc = p.coords();
  Vec3 u = q.coords() + minkowski(pc, q.coords()) * pc;
  u += minkowski(u, pc) * pc;
  const double n2 = minkowski(u, u);
  if (d == 0.0 || !(n2 > 0.0)) throw Error(ErrorCode::CoincidentPoints, "log of coincident points");
  return {HTangent{p, u / std::sqrt(n2)}, d};
}

double signed_dist_to_geodesic(const HPoint& p, const HGeodesicLine& line) {
  return std::asinh(minkowski(p.coords(), line.normal()));
}

HPoint project_to_geodesic(const HPoint& p, const HGeodesicLine& line) {
  const Vec3& n = line.normal();
  return HPoint::normalized(p.coords() - minkowski(p.coords(), n) * n);
}

HTangent normal_field(const HPoint& p, const HGeodesicLine& line) {
  const Vec3& n = line.normal();
  const double a = minkowski(p.coords(), n);
  if (std::abs(a) < 1e-15) throw Error(ErrorCode::PointOnGeodesic, "point lies on the geodesic");
  // Tangential part of n is the gradient of <., n>; it has Minkowski norm^2 1 + a^2.
  const Vec3 grad = n + a * p.coords();
  const double sign = a > 0.0 ? -1.0 : 1.0;
  return {p, sign * grad / std::sqrt(1.0 + a * a)};
}

std::optional<RayHit> ray_hit_geodesic(const HPoint& x, const HTangent& xi,
                                       const HGeodesicLine& line) {
  validate_tangent(HTangent{x, xi.vec});
  const Vec3& n = line.normal();
  const double a = minkowski(x.coords(), n);
  if (std::abs(a) < 1e-15) throw Error(ErrorCode::PointOnGeodesic, "ray starts on the geodesic");
  const double b = minkowski(xi.vec, n);
  if (b == 0.0) return std::nullopt;
  const double r = -a / b;
  if (!(r > 0.0 && r < 1.0)) return std::nullopt;
  // exp_x(s xi) is proportional to x + tanh(s) xi, with <., .> = -(1 - r^2).
  const Vec3 v = (x.coords() + r * xi.vec) / std::sqrt((1.0 - r) * (1.0 + r));
  return RayHit{HPoint::from_spatial(v.head<2>()), 0.5 * std::log((b - a) / (b + a))};
}

bool domain_contains(const GeodesicDomain& domain, const HPoint& p) {
  for (const auto& b : domain.boundaries) {
    if (!(minkowski(p.coords(), b.normal()) < -kInteriorMargin)) return false;
  }
  return true;
}

HTangent unit_tangent(const HPoint& p, double angle) {
  const Vec3& x = p.coords();
  Vec3 e1 = Vec3(1, 0, 0) + minkowski(Vec3(1, 0, 0), x) * x;
  e1 /= std::sqrt(minkowski(e1, e1));
  Vec3 e2 = Vec3(0, 1, 0) + minkowski(Vec3(0, 1, 0), x) * x;
  e2 -= minkowski(e2, e1) * e1;
  e2 /= std::sqrt(minkowski(e2, e2));
  return {p, std::cos(angle) * e1 + std::sin(angle) * e2};
}

}  // namespace funkspace::hyp
