#include "test_support.hpp"

namespace {

using namespace funkspace;
using namespace funkspace::hyp;
using funkspace::testing::on_axis;

HTangent at_origin(double a, double b) { return {HPoint::origin(), Vec3(a, b, 0.0)}; }

TEST(HPoint, Validation) {
  EXPECT_ERROR_CODE(HPoint(Vec3(1.0, 0.0, 1.0)), ErrorCode::InvalidHPoint);
  EXPECT_ERROR_CODE(HPoint(Vec3(0.0, 0.0, -1.0)), ErrorCode::InvalidHPoint);
  EXPECT_ERROR_CODE(HPoint::from_disk(Eigen::Vector2d(0.6, 0.8)), ErrorCode::InvalidHPoint);
}

TEST(HPoint, DiskRoundTrip) {
  const Eigen::Vector2d u(0.3, -0.55);
  EXPECT_LT((HPoint::from_disk(u).to_disk() - u).norm(), 1e-15);
  // Disk radius tanh(s/2) sits at hyperbolic distance s from the origin.
  EXPECT_NEAR(h_dist(HPoint::origin(), HPoint::from_disk(Eigen::Vector2d(std::tanh(0.75), 0))), 1.5, 1e-14);
}

TEST(HDist, Examples) {
  EXPECT_EQ(h_dist(on_axis(0.4), on_axis(0.4)), 0.0);
  EXPECT_NEAR(h_dist(HPoint::origin(), on_axis(1.0)), 1.0, 1e-15);
  EXPECT_NEAR(h_dist(HPoint::origin(), on_axis(2.0)), 2.0, 1e-15);
  EXPECT_NEAR(h_dist(on_axis(1e-9), HPoint::origin()), 1e-9, 1e-22);
}

TEST(ExpMap, Examples) {
  EXPECT_EQ(exp_map(at_origin(0, 1), 0.0).coords(), HPoint::origin().coords());
  EXPECT_LT((exp_map(at_origin(1, 0), 1.0).coords() - on_axis(1.0).coords()).norm(), 1e-15);
  EXPECT_ERROR_CODE(exp_map(at_origin(2, 0), 1.0), ErrorCode::InvalidTangent);
  EXPECT_ERROR_CODE(exp_map(HTangent{HPoint::origin(), Vec3(1, 0, 1)}, 1.0), ErrorCode::InvalidTangent);
}

TEST(LogMap, Examples) {
  const auto r = log_map(HPoint::origin(), on_axis(1.0));
  EXPECT_NEAR(r.length, 1.0, 1e-15);
  EXPECT_LT((r.tangent.vec - Vec3(1, 0, 0)).norm(), 1e-15);
  const auto c = log_map(HPoint::origin(), exp_map(at_origin(0, 1), 0.7));
  EXPECT_NEAR(c.length, 0.7, 1e-15);
  EXPECT_LT((c.tangent.vec - Vec3(0, 1, 0)).norm(), 1e-14);
  EXPECT_ERROR_CODE(log_map(on_axis(0.3), on_axis(0.3)), ErrorCode::CoincidentPoints);
}

TEST(SignedDist, Examples) {
  const HGeodesicLine sigma(Vec3(1, 0, 0));
  EXPECT_NEAR(signed_dist_to_geodesic(HPoint::origin(), sigma), 0.0, 1e-15);
  EXPECT_NEAR(signed_dist_to_geodesic(on_axis(1.0), sigma), 1.0, 1e-15);
  EXPECT_NEAR(signed_dist_to_geodesic(on_axis(1.0), sigma.flipped()), -1.0, 1e-15);
}

TEST(Projection, Examples) {
  const HGeodesicLine sigma(Vec3(1, 0, 0));
  EXPECT_LT((project_to_geodesic(on_axis(1.0), sigma).coords() - Vec3(0, 0, 1)).norm(), 1e-15);
  const HPoint on = exp_map(at_origin(0, 1), 0.8);
  EXPECT_LT((project_to_geodesic(on, sigma).coords() - on.coords()).norm(), 1e-14);
  const HPoint p = HPoint::from_disk(Eigen::Vector2d(0.4, 0.3));
  const HPoint f = project_to_geodesic(p, sigma);
  EXPECT_NEAR(h_dist(p, f), std::abs(signed_dist_to_geodesic(p, sigma)), 1e-12);
}

TEST(NormalField, Example) {
  const HGeodesicLine sigma(Vec3(1, 0, 0));
  const auto nu = normal_field(on_axis(1.0), sigma);
  EXPECT_LT((nu.vec - Vec3(-std::cosh(1.0), 0, -std::sinh(1.0))).norm(), 1e-14);
  EXPECT_ERROR_CODE(normal_field(HPoint::origin(), sigma), ErrorCode::PointOnGeodesic);
}

TEST(RayHit, Examples) {
  const HGeodesicLine sigma(Vec3(1, 0, 0));
  const HPoint x = on_axis(2.0);
  const HTangent toward{x, Vec3(-std::cosh(2.0), 0, -std::sinh(2.0))};
  const auto hit = ray_hit_geodesic(x, toward, sigma);
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->s, 2.0, 1e-13);
  EXPECT_LT((hit->point.coords() - Vec3(0, 0, 1)).norm(), 1e-13);
  EXPECT_FALSE(ray_hit_geodesic(x, HTangent{x, -toward.vec}, sigma));
  EXPECT_FALSE(ray_hit_geodesic(x, HTangent{x, Vec3(0, 1, 0)}, sigma));
  EXPECT_ERROR_CODE(ray_hit_geodesic(HPoint::origin(), at_origin(1, 0), sigma), ErrorCode::PointOnGeodesic);
}

TEST(RayHit, NearAsymptoticRayStaysFinite) {
  const HGeodesicLine sigma(Vec3(1, 0, 0));
  const HPoint x = on_axis(1.0);
  // Tangent toward the ideal endpoint (0, 1) of sigma, tilted slightly toward sigma.
  const Vec3 w(0, 1, 1);
  Vec3 t0 = w + minkowski(w, x.coords()) * x.coords();
  t0 /= std::sqrt(minkowski(t0, t0));
  const Vec3 nu = normal_field(x, sigma).vec;
  for (double eps : {1e-4, 1e-8, 1e-12}) {
    Vec3 v = t0 + eps * nu;
    v /= std::sqrt(minkowski(v, v));
    const auto hit = ray_hit_geodesic(x, HTangent{x, v}, sigma);
    ASSERT_TRUE(hit) << eps;
    EXPECT_TRUE(std::isfinite(hit->s));
    EXPECT_NEAR(signed_dist_to_geodesic(hit->point, sigma), 0.0, 1e-4);
  }
}

TEST(Domain, Contains) {
  const HGeodesicLine sigma(Vec3(-1, 0, 0));
  const auto d = GeodesicDomain::make({sigma}, on_axis(1.0));
  EXPECT_TRUE(domain_contains(d, on_axis(1.0)));
  EXPECT_FALSE(domain_contains(d, HPoint::origin()));
  EXPECT_FALSE(domain_contains(d, on_axis(-1.0)));
  EXPECT_ERROR_CODE(GeodesicDomain::make({sigma}, on_axis(-1.0)), ErrorCode::ValidationError);
}

TEST(Line, FromIdealEndpoints) {
  const auto l = HGeodesicLine::from_ideal_endpoints(Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0));
  EXPECT_LT(minkowski(HPoint::from_disk(Eigen::Vector2d(0, 0.5)).coords(), l.normal()), 0.0);
  EXPECT_GT(minkowski(HPoint::from_disk(Eigen::Vector2d(0, -0.5)).coords(), l.normal()), 0.0);
  const auto [a, b] = l.ideal_endpoints();
  EXPECT_NEAR(std::abs(a.x()), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(b.x()), 1.0, 1e-12);
  EXPECT_ERROR_CODE(HGeodesicLine(Vec3(0, 0, 1)), ErrorCode::InvalidArgument);
}

TEST(Isometry, PreservesDistance) {
  const auto g = Isometry::rotation(0.7) * Isometry::boost(1.3);
  const HPoint p = HPoint::from_disk(Eigen::Vector2d(0.2, 0.1));
  const HPoint q = HPoint::from_disk(Eigen::Vector2d(-0.5, 0.4));
  EXPECT_NEAR(h_dist(g.apply(p), g.apply(q)), h_dist(p, q), 1e-12);
  const HGeodesicLine sigma(Vec3(1, 0, 0));
  EXPECT_NEAR(signed_dist_to_geodesic(g.apply(p), g.apply(sigma)), signed_dist_to_geodesic(p, sigma), 1e-12);
}

TEST(UnitTangent, Orthonormal) {
  const HPoint p = HPoint::from_disk(Eigen::Vector2d(0.3, -0.6));
  const auto a = unit_tangent(p, 0.4), b = unit_tangent(p, 0.4 + 1.5707963267948966);
  EXPECT_NEAR(minkowski(a.vec, a.vec), 1.0, 1e-12);
  EXPECT_NEAR(minkowski(a.vec, p.coords()), 0.0, 1e-12);
  EXPECT_NEAR(minkowski(a.vec, b.vec), 0.0, 1e-12);
}

}  // namespace
