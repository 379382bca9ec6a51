#include "test_support.hpp"

#include "funkspace/scene.hpp"

#include <limits>

namespace {

using namespace funkspace;
using namespace funkspace::euclid;
using funkspace::testing::disk;
using funkspace::testing::half_plane;
using funkspace::testing::square;
using funkspace::testing::v2;
using funkspace::testing::v3;

TEST(ContainsInterior, SquareCenterAndBoundary) {
  EXPECT_TRUE(contains_interior(square(), v2(0, 0)));
  EXPECT_FALSE(contains_interior(square(), v2(1, 0)));
  EXPECT_FALSE(contains_interior(square(), v2(2, 0)));
}

TEST(ContainsInterior, DiskMargin) {
  EXPECT_TRUE(contains_interior(disk(), v2(0.999, 0)));
  EXPECT_FALSE(contains_interior(disk(), v2(0.999999999, 0)));
}

TEST(ContainsInterior, DimensionMismatch) {
  EXPECT_ERROR_CODE(contains_interior(square(), v3(0, 0, 0)), ErrorCode::DimensionMismatch);
}

TEST(DistanceToHyperplane, Examples) {
  const Hyperplane pi{v2(1, 0), 1.0};
  EXPECT_DOUBLE_EQ(distance_to_hyperplane(v2(0, 0), pi), 1.0);
  EXPECT_DOUBLE_EQ(distance_to_hyperplane(v2(0.5, 0), pi), 0.5);
  EXPECT_NEAR(distance_to_hyperplane(v2(0.3, 0.4), Hyperplane{v2(0.6, 0.8), 2.0}), 1.5, 1e-15);
}

TEST(DistanceToHyperplane, OutsideThrows) {
  EXPECT_ERROR_CODE(distance_to_hyperplane(v2(1, 0), Hyperplane{v2(1, 0), 1.0}),
                    ErrorCode::PointOutsideHalfspace);
  EXPECT_ERROR_CODE(distance_to_hyperplane(v2(3, 0), Hyperplane{v2(1, 0), 1.0}),
                    ErrorCode::PointOutsideHalfspace);
}

TEST(Hyperplane, FromUnnormalized) {
  const auto h = Hyperplane::from_unnormalized(v2(3, 4), 10.0);
  EXPECT_NEAR(h.normal.norm(), 1.0, 1e-15);
  EXPECT_NEAR(h.offset, 2.0, 1e-15);
}

TEST(Foot, Examples) {
  EXPECT_TRUE(foot(v2(0, 0), Hyperplane{v2(1, 0), 1.0}).isApprox(v2(1, 0)));
  EXPECT_TRUE(foot(v2(1, 0.7), Hyperplane{v2(1, 0), 1.0}).isApprox(v2(1, 0.7)));
  EXPECT_LT((foot(v2(0.3, 0.4), Hyperplane{v2(0.6, 0.8), 2.0}) - v2(1.2, 1.6)).norm(), 1e-15);
  EXPECT_ERROR_CODE(foot(v3(0, 0, 0), Hyperplane{v2(1, 0), 1.0}), ErrorCode::DimensionMismatch);
}

TEST(RayExit, SquareFacet) {
  const auto hit = ray_exit(square(), v2(0, 0), v2(1, 0));
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->t_exit, 1.0, 1e-15);
  EXPECT_LT((hit->point - v2(1, 0)).norm(), 1e-15);
  ASSERT_EQ(hit->active.size(), 1u);
  EXPECT_LT((hit->active[0].normal - v2(1, 0)).norm(), 1e-15);
}

TEST(RayExit, SquareCorner) {
  const auto hit = ray_exit(square(), v2(0, 0), v2(1, 1).normalized());
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->t_exit, std::sqrt(2.0), 1e-14);
  EXPECT_LT((hit->point - v2(1, 1)).norm(), 1e-14);
  EXPECT_EQ(hit->active.size(), 2u);
}

TEST(RayExit, RecessionDirection) {
  EXPECT_FALSE(ray_exit(half_plane(), v2(0, 0), v2(-1, 0)));
  EXPECT_FALSE(ray_exit(half_plane(), v2(0, 0), v2(0, 1)));
}

TEST(RayExit, EllipsoidClosedForm) {
  const auto e = ConvexBody::ellipsoid(v2(0, 0), Eigen::Matrix2d::Identity(), v2(2, 1));
  const auto hit = ray_exit(e, v2(0, 0), v2(1, 1).normalized());
  ASSERT_TRUE(hit);
  // t^2/2 (1/4 + 1) = 1
  EXPECT_NEAR(hit->t_exit, std::sqrt(2.0 / 1.25), 1e-14);
}

TEST(RayExit, RequiresInterior) {
  EXPECT_ERROR_CODE(ray_exit(square(), v2(1, 0), v2(1, 0)), ErrorCode::PointNotInterior);
}

TEST(RayExit, OracleMatchesDisk) {
  const auto o = io::lp_ball_oracle(v2(0, 0), 1.0, 2.0);
  const auto body = ConvexBody::oracle(2, o, v2(0, 0), 1.0);
  for (double a = 0.0; a < 6.28; a += 0.37) {
    const Eigen::VectorXd x = v2(0.3, -0.2);
    const Eigen::VectorXd xi = v2(std::cos(a), std::sin(a));
    const auto exact = ray_exit(disk(), x, xi);
    const auto hit = ray_exit(body, x, xi);
    ASSERT_TRUE(hit);
    EXPECT_NEAR(hit->t_exit, exact->t_exit, 1e-12);
  }
}

TEST(RayExit, OracleLpBallHitsBoundary) {
  const double p = 3.5;
  const auto body = ConvexBody::oracle(3, io::lp_ball_oracle(v3(0, 0, 0), 1.0, p), v3(0, 0, 0), 1.0);
  const Eigen::VectorXd x = v3(0.2, -0.1, 0.4);
  const Eigen::VectorXd xi = v3(1.0, 0.3, -0.5).normalized();
  const auto hit = ray_exit(body, x, xi);
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->point.array().abs().pow(p).sum(), 1.0, 1e-12);
}

TEST(SupportingHyperplanes, Examples) {
  const auto facet = supporting_hyperplanes_at(square(), v2(1, 0));
  ASSERT_EQ(facet.size(), 1u);
  EXPECT_LT((facet[0].normal - v2(1, 0)).norm(), 1e-15);
  EXPECT_EQ(supporting_hyperplanes_at(square(), v2(1, 1)).size(), 2u);
  const auto smooth = supporting_hyperplanes_at(disk(), v2(0.6, 0.8));
  ASSERT_EQ(smooth.size(), 1u);
  EXPECT_LT((smooth[0].normal - v2(0.6, 0.8)).norm(), 1e-12);
  EXPECT_NEAR(smooth[0].offset, 1.0, 1e-12);
}

TEST(SupportingHyperplanes, OffBoundaryThrows) {
  EXPECT_ERROR_CODE(supporting_hyperplanes_at(square(), v2(0.5, 0)), ErrorCode::PointNotOnBoundary);
  EXPECT_ERROR_CODE(supporting_hyperplanes_at(disk(), v2(0.5, 0)), ErrorCode::PointNotOnBoundary);
}

TEST(SupportFunction, Examples) {
  EXPECT_NEAR(support_function(disk(), v2(1, 0)), 1.0, 1e-15);
  const auto e = ConvexBody::ellipsoid(v2(0, 0), Eigen::Matrix2d::Identity(), v2(2, 1));
  EXPECT_NEAR(support_function(e, v2(1, 0)), 2.0, 1e-15);
  EXPECT_NEAR(support_function(square(), v2(1, 1).normalized()), std::sqrt(2.0), 1e-14);
  EXPECT_ERROR_CODE(support_function(half_plane(), v2(-1, 0)), ErrorCode::Unbounded);
}

TEST(RadialFunction, Examples) {
  EXPECT_NEAR(radial_function(disk(), v2(0, 0), v2(0.6, -0.8)), 1.0, 1e-15);
  EXPECT_NEAR(radial_function(square(), v2(0.5, 0), v2(1, 0)), 0.5, 1e-15);
  EXPECT_NEAR(radial_function(square(), v2(0.5, 0), v2(-1, 0)), 1.5, 1e-15);
  EXPECT_EQ(radial_function(half_plane(), v2(0, 0), v2(0, 1)), std::numeric_limits<double>::infinity());
  EXPECT_ERROR_CODE(radial_function(disk(), v2(2, 0), v2(1, 0)), ErrorCode::PointNotInterior);
}

TEST(ConvexBody, PolytopeValidation) {
  std::vector<Hyperplane> empty{{v2(1, 0), -1.0}, {v2(-1, 0), -1.0}};
  EXPECT_ERROR_CODE(ConvexBody::polytope(empty, v2(0, 0)), ErrorCode::ValidationError);
  EXPECT_FALSE(half_plane().bounded());
  EXPECT_TRUE(square().bounded());
}

TEST(ConvexBody, TransformedSquare) {
  Eigen::Matrix2d A;
  A << 2, 1, 0, 1;
  const auto t = square().transformed(A, v2(1, -1));
  const Eigen::VectorXd x = v2(0.2, 0.3);
  const Eigen::VectorXd xi = v2(0.6, 0.8);
  const auto before = ray_exit(square(), x, xi);
  const Eigen::VectorXd image = A * xi;
  const auto after = ray_exit(t, A * x + v2(1, -1), image.normalized());
  ASSERT_TRUE(before && after);
  EXPECT_NEAR(after->t_exit, before->t_exit * image.norm(), 1e-13);
}

}  // namespace
