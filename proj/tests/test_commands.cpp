#include "test_support.hpp"

#include "funkspace/commands.hpp"

namespace {

using namespace funkspace;
using namespace funkspace::io;

Scene square_scene() {
  return parse_scene(R"({"space":"euclidean","body":{"type":"box","lo":[-1,-1],"hi":[1,1]},
      "points":{"x":[0,0],"y":[0.5,0]}})");
}

Scene disk_scene() {
  return parse_scene(R"({"space":"euclidean","body":{"type":"ball","center":[0,0],"radius":1},
      "points":{"x":[0,0],"y":[0.5,0]}})");
}

Scene half_disk_scene() {
  return parse_scene(R"({"space":"hyperbolic2","domain":{"boundaries_disk":[{"ideal_endpoints":[[1,0],[-1,0]]}]},
      "points":{"x":[0,0.5],"y":[0.3,0.2]}})");
}

TEST(Metric, ParseAndName) {
  for (const char* name : {"f1", "f2", "f3", "hilbert", "cross-ratio", "phi1", "wp-f1", "wp-f2", "wp-f3", "wp-hilbert"}) {
    EXPECT_EQ(to_string(parse_metric(name)), name);
  }
  EXPECT_EQ(metric_space(Metric::WpF2), Space::Hyperbolic2);
  EXPECT_EQ(metric_space(Metric::Hilbert), Space::Euclidean);
  EXPECT_ERROR_CODE(parse_metric("f4"), ErrorCode::InvalidArgument);
}

TEST(Dist, SquareF2) {
  const auto j = cmd_dist(square_scene(), "x", "y", Metric::F2);
  EXPECT_NEAR(j.at("value").get<double>(), std::log(2.0), 1e-15);
  EXPECT_EQ(j.at("attained_at").at("facet").get<int>(), 0);
  EXPECT_EQ(j.at("metric"), "f2");
}

TEST(Dist, DiskHilbert) {
  const auto j = cmd_dist(disk_scene(), "x", "y", Metric::Hilbert);
  EXPECT_NEAR(j.at("value").get<double>(), 0.5493061443340549, 1e-15);
}

TEST(Dist, HyperbolicMetrics) {
  const auto s = half_disk_scene();
  const double f2 = cmd_dist(s, "x", "y", Metric::WpF2).at("value").get<double>();
  const double p1 = cmd_dist(s, "x", "y", Metric::Phi1).at("value").get<double>();
  EXPECT_LE(p1, f2 + 1e-9);
  EXPECT_GE(cmd_dist(s, "x", "y", Metric::WpHilbert).at("value").get<double>(), 0.0);
}

TEST(Dist, Errors) {
  EXPECT_ERROR_CODE(cmd_dist(square_scene(), "x", "y", Metric::WpF2), ErrorCode::MetricSpaceMismatch);
  EXPECT_ERROR_CODE(cmd_dist(half_disk_scene(), "x", "y", Metric::F1), ErrorCode::MetricSpaceMismatch);
  EXPECT_ERROR_CODE(cmd_dist(square_scene(), "x", "q", Metric::F1), ErrorCode::UnknownPoint);
}

TEST(Ball, DiskFunkIsCircle) {
  const auto b = cmd_ball(disk_scene(), "x", std::log(2.0), 32, Metric::F1);
  ASSERT_EQ(b.samples.size(), 32u);
  for (const auto& s : b.samples) {
    ASSERT_TRUE(s.point);
    EXPECT_NEAR(s.point->norm(), 0.5, 1e-9);
  }
}

TEST(Ball, DiskHilbertIsCircle) {
  const auto b = cmd_ball(disk_scene(), "x", std::atanh(0.5), 24, Metric::Hilbert);
  for (const auto& s : b.samples) EXPECT_NEAR(s.point->norm(), 0.5, 1e-9);
}

TEST(Ball, SquareFunkBallIsConvex) {
  const auto b = cmd_ball(square_scene(), "x", 0.8, 64, Metric::F1);
  const auto n = b.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = *b.samples[i].point, p = *b.samples[(i + 1) % n].point,
                          c = *b.samples[(i + 2) % n].point;
    const Eigen::Vector2d u = p - a, w = c - p;
    EXPECT_GE(u.x() * w.y() - u.y() * w.x(), -1e-12);
  }
}

TEST(Ball, UnboundedDirections) {
  const auto s = parse_scene(R"({"space":"euclidean","body":{"type":"halfspace_polytope",
      "halfspaces":[{"normal":[1,0],"offset":1}]},"points":{"o":[0,0]}})");
  const auto b = cmd_ball(s, "o", 0.5, 8, Metric::F1);
  int unbounded = 0;
  for (const auto& smp : b.samples) unbounded += smp.unbounded ? 1 : 0;
  EXPECT_GT(unbounded, 0);
  EXPECT_LT(unbounded, 8);
  const std::string csv = ball_csv(b);
  EXPECT_EQ(csv.rfind("index,angle,x,y,status\n", 0), 0u);
  EXPECT_NE(csv.find("unbounded"), std::string::npos);
}

TEST(Ball, HyperbolicInsideDisk) {
  const auto b = cmd_ball(half_disk_scene(), "x", 0.3, 16, Metric::WpHilbert);
  for (const auto& s : b.samples) {
    if (s.point) EXPECT_LT(s.point->norm(), 1.0);
  }
}

TEST(Render, SquareScene) {
  const std::string svg = render_svg(square_scene());
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("class=\"body\""), std::string::npos);
  std::size_t markers = 0;
  for (auto pos = svg.find("class=\"point\""); pos != std::string::npos; pos = svg.find("class=\"point\"", pos + 1)) {
    ++markers;
  }
  EXPECT_EQ(markers, 2u);
}

TEST(Render, HyperbolicScene) {
  const std::string svg = render_svg(half_disk_scene());
  EXPECT_NE(svg.find("class=\"ideal\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"boundary\""), std::string::npos);
}

TEST(Render, BallOverlayIsDeterministic) {
  RenderOptions opts;
  opts.balls.push_back({"x", 0.5, Metric::F1, 32});
  opts.geodesics.push_back({"x", "y"});
  const std::string a = render_svg(disk_scene(), opts);
  EXPECT_NE(a.find("class=\"ball\""), std::string::npos);
  EXPECT_EQ(a, render_svg(disk_scene(), opts));
}

}  // namespace
