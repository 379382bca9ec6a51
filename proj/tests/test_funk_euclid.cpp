#include "test_support.hpp"

#include "funkspace/funk.hpp"

namespace {

using namespace funkspace;
using namespace funkspace::funk;
using funkspace::testing::disk;
using funkspace::testing::half_plane;
using funkspace::testing::square;
using funkspace::testing::v2;
using funkspace::testing::v3;

const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);

TEST(FunkF1, DiskRadial) {
  const auto v = funk_f1(disk(), v2(0, 0), v2(0.5, 0));
  EXPECT_NEAR(v.value, kLog2, 1e-15);
  ASSERT_TRUE(std::holds_alternative<BoundaryHit>(v.attained_at));
  EXPECT_LT((std::get<BoundaryHit>(v.attained_at).point - v2(1, 0)).norm(), 1e-15);
}

TEST(FunkF1, Degenerate) {
  EXPECT_EQ(funk_f1(square(), v2(0.2, 0.1), v2(0.2, 0.1)).value, 0.0);
  EXPECT_EQ(funk_f1(half_plane(), v2(0, 0), v2(-1, 0)).value, 0.0);
  EXPECT_ERROR_CODE(funk_f1(disk(), v2(0, 0), v2(1, 0)), ErrorCode::PointNotInterior);
}

TEST(FunkF1, NotSymmetric) {
  EXPECT_NEAR(funk_f1(disk(), v2(0.5, 0), v2(0, 0)).value, std::log(1.5), 1e-15);
}

TEST(FunkF2, SquareFacetMaximum) {
  const auto v = funk_f2(square(), v2(0, 0), v2(0.5, 0));
  EXPECT_NEAR(v.value, kLog2, 1e-15);
  ASSERT_TRUE(v.facet);
  EXPECT_EQ(*v.facet, 0u);
}

TEST(FunkF2, DiskAttainedNormal) {
  const auto v = funk_f2(disk(), v2(0, 0), v2(0.5, 0));
  EXPECT_NEAR(v.value, kLog2, 1e-12);
  ASSERT_TRUE(std::holds_alternative<Hyperplane>(v.attained_at));
  EXPECT_LT((std::get<Hyperplane>(v.attained_at).normal - v2(1, 0)).norm(), 1e-6);
}

TEST(FunkF2, MatchesF1OnEllipsoid) {
  Eigen::Matrix3d axes = Eigen::AngleAxisd(0.4, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const auto e = ConvexBody::ellipsoid(v3(0.1, 0, -0.2), axes, v3(2, 1, 0.5));
  const Point x = v3(0.3, 0.2, -0.1), y = v3(-0.5, 0.4, 0.0);
  EXPECT_NEAR(funk_f2(e, x, y).value, funk_f1(e, x, y).value, 1e-9);
}

TEST(FunkF2, UnboundedPolytopeClampsAtZero) {
  const auto v = funk_f2(half_plane(), v2(0, 0), v2(-1, 0));
  EXPECT_LT(v.raw, 0.0);
  EXPECT_EQ(v.value, 0.0);
}

TEST(FinslerNorm, Examples) {
  EXPECT_NEAR(finsler_norm(disk(), v2(0, 0), v2(0.6, 0.8)), 1.0, 1e-15);
  EXPECT_NEAR(finsler_norm(disk(), v2(0, 0), v2(2, 0)), 2.0, 1e-15);
  EXPECT_NEAR(finsler_norm(square(), v2(0.5, 0), v2(1, 0)), 2.0, 1e-15);
  EXPECT_EQ(finsler_norm(half_plane(), v2(0, 0), v2(-1, 0)), 0.0);
  EXPECT_ERROR_CODE(finsler_norm(square(), v2(1, 0), v2(1, 0)), ErrorCode::PointNotInterior);
}

TEST(FinslerNorm, DualAgrees) {
  for (double a = 0.1; a < 6.2; a += 0.5) {
    const Vector xi = v2(std::cos(a), std::sin(a));
    EXPECT_NEAR(finsler_norm_dual(square(), v2(0.3, -0.4), xi), finsler_norm(square(), v2(0.3, -0.4), xi),
                1e-12);
  }
}

TEST(PathLength, ConstantAndStraight) {
  EXPECT_EQ(funk_path_length(disk(), PiecewisePath{{v2(0.1, 0), v2(0.1, 0)}}), 0.0);
  EXPECT_NEAR(funk_path_length(disk(), PiecewisePath{{v2(0, 0), v2(0.5, 0)}}), kLog2, 1e-8);
}

TEST(PathLength, DetourIsLonger) {
  const double detour = funk_path_length(disk(), PiecewisePath{{v2(0, 0), v2(0.25, 0.3), v2(0.5, 0)}});
  EXPECT_GE(detour, kLog2);
}

TEST(PathLength, RejectsExteriorKnot) {
  EXPECT_ERROR_CODE(funk_path_length(disk(), PiecewisePath{{v2(0, 0), v2(2, 0)}}),
                    ErrorCode::PointNotInterior);
}

TEST(FunkF3, Examples) {
  F3Options fast;
  fast.restarts = 2;
  EXPECT_NEAR(funk_f3(disk(), v2(0, 0), v2(0.5, 0), fast).value, kLog2, 1e-6);
  EXPECT_EQ(funk_f3(disk(), v2(0.2, 0), v2(0.2, 0), fast).value, 0.0);
  EXPECT_NEAR(funk_f3(square(), v2(-0.5, 0), v2(0.5, 0.4), fast).value, kLog3, 1e-6);
}

TEST(FunkF3, PathEndpoints) {
  F3Options fast;
  fast.restarts = 1;
  const auto path = funk_f3_path(square(), v2(-0.5, 0), v2(0.5, 0.4), fast);
  ASSERT_EQ(path.knots.size(), 7u);
  EXPECT_EQ(path.knots.front(), v2(-0.5, 0));
  EXPECT_EQ(path.knots.back(), v2(0.5, 0.4));
}

TEST(Hilbert, Examples) {
  EXPECT_NEAR(hilbert(disk(), v2(0, 0), v2(0.5, 0)).value, 0.5 * kLog3, 1e-15);
  EXPECT_NEAR(hilbert(disk(), v2(0, 0), v2(0.5, 0)).value, std::atanh(0.5), 1e-15);
  EXPECT_EQ(hilbert(disk(), v2(0.1, 0.2), v2(0.1, 0.2)).value, 0.0);
  EXPECT_NEAR(hilbert(square(), v2(0, 0), v2(0.5, 0)).value, 0.5 * kLog3, 1e-15);
}

TEST(CrossRatio, Examples) {
  EXPECT_NEAR(cross_ratio_log(disk(), v2(0, 0), v2(0.5, 0)), kLog3, 1e-15);
  EXPECT_NEAR(cross_ratio_log(disk(), v2(-0.3, 0), v2(0.3, 0)), 2.0 * std::log(13.0 / 7.0), 1e-14);
  EXPECT_EQ(cross_ratio_log(disk(), v2(0.1, 0), v2(0.1, 0)), 0.0);
  EXPECT_ERROR_CODE(cross_ratio_log(half_plane(), v2(0, 0), v2(0.5, 0)), ErrorCode::FiniteHitsRequired);
}

TEST(DerivativeCheck, MatchesFiniteDifferences) {
  const Hyperplane plane = Hyperplane::from_unnormalized(v2(1, 2), 3.0);
  const Point x = v2(0.1, -0.2);
  const Line line{v2(-0.4, 0.3), v2(0.8, -0.6)};
  const double t = 0.25, h = 1e-4;
  auto f = [&](double s) { return std::log(distance_to_hyperplane(x, plane) / distance_to_hyperplane(line.at(s), plane)); };
  const auto d = derivative_check(x, line, t, plane);
  EXPECT_NEAR(d.d1, (f(t + h) - f(t - h)) / (2 * h), 1e-7);
  EXPECT_NEAR(d.d2, (f(t + h) - 2 * f(t) + f(t - h)) / (h * h), 1e-5);
  EXPECT_GE(d.d2, 0.0);
  EXPECT_ERROR_CODE(derivative_check(x, Line{v2(5, 5), v2(1, 0)}, 0.0, plane), ErrorCode::PointOutsideHalfspace);
}

TEST(ConvexityProfile, ForwardOnDisk) {
  const Line line{v2(-0.2, 0.1), v2(0.6, 0.8)};
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-0.8 + 1.5 * i / 40.0);
  const auto p = convexity_profile(disk(), v2(0.3, -0.3), line, grid);
  EXPECT_EQ(p.values.size(), grid.size());
  EXPECT_EQ(p.second_differences.size(), grid.size() - 2);
  EXPECT_TRUE(p.all_nonneg);
}

TEST(ConvexityProfile, RejectsExteriorSample) {
  const Line line{v2(0, 0), v2(1, 0)};
  EXPECT_ERROR_CODE(convexity_profile(disk(), v2(0, 0), line, {0.0, 0.5, 1.5}), ErrorCode::PointNotInterior);
}

TEST(HilbertMidpoint, Balanced) {
  const Point p = v2(-0.6, 0.1), q = v2(0.5, 0.3);
  const Point m = hilbert_midpoint(disk(), p, q);
  EXPECT_NEAR(hilbert(disk(), p, m).value, hilbert(disk(), m, q).value, 1e-9);
}

TEST(Formulation, Names) {
  EXPECT_EQ(to_string(Formulation::F1), "F1");
  EXPECT_EQ(to_string(Formulation::Hilbert), "Hilbert");
}

}  // namespace
