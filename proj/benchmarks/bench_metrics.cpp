#include "funkspace/funk.hpp"
#include "funkspace/funk_model.hpp"
#include "funkspace/scene.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

namespace {

using namespace funkspace;

euclid::ConvexBody regular_polygon(int m) {
  std::vector<euclid::Hyperplane> hs;
  for (int i = 0; i < m; ++i) {
    const double a = 2.0 * M_PI * i / m;
    hs.push_back({Eigen::Vector2d(std::cos(a), std::sin(a)), 1.0});
  }
  return euclid::ConvexBody::polytope(hs, Eigen::Vector2d::Zero());
}

euclid::ConvexBody ellipsoid3() {
  return euclid::ConvexBody::ellipsoid(Eigen::Vector3d(0.1, 0, 0), Eigen::Matrix3d::Identity(),
                                       Eigen::Vector3d(2, 1, 0.5));
}

void BM_F1_Polygon(benchmark::State& state) {
  const auto body = regular_polygon(static_cast<int>(state.range(0)));
  const Eigen::Vector2d x(0.1, -0.2), y(0.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(funk::funk_f1(body, x, y).value);
}
BENCHMARK(BM_F1_Polygon)->Arg(4)->Arg(16)->Arg(64);

void BM_F2_Polygon(benchmark::State& state) {
  const auto body = regular_polygon(static_cast<int>(state.range(0)));
  const Eigen::Vector2d x(0.1, -0.2), y(0.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(funk::funk_f2(body, x, y).value);
}
BENCHMARK(BM_F2_Polygon)->Arg(4)->Arg(16)->Arg(64);

void BM_F2_Ellipsoid(benchmark::State& state) {
  const auto body = ellipsoid3();
  const Eigen::Vector3d x(0.3, 0.2, -0.1), y(-0.5, 0.4, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(funk::funk_f2(body, x, y).value);
}
BENCHMARK(BM_F2_Ellipsoid);

void BM_RayExit_LpOracle(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  const auto body = euclid::ConvexBody::oracle(d, io::lp_ball_oracle(c, 1.0, 3.0), c, 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.1);
  const Eigen::VectorXd xi = Eigen::VectorXd::LinSpaced(d, 1.0, 0.2).normalized();
  for (auto _ : state) benchmark::DoNotOptimize(euclid::ray_exit(body, x, xi)->t_exit);
}
BENCHMARK(BM_RayExit_LpOracle)->Arg(2)->Arg(3);

void BM_Hilbert_Ellipsoid(benchmark::State& state) {
  const auto body = ellipsoid3();
  const Eigen::Vector3d x(0.3, 0.2, -0.1), y(-0.5, 0.4, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(funk::hilbert(body, x, y).value);
}
BENCHMARK(BM_Hilbert_Ellipsoid);

void BM_F3_Disk(benchmark::State& state) {
  const auto body = euclid::ConvexBody::ball(Eigen::Vector2d::Zero(), 1.0);
  funk::F3Options options;
  options.restarts = static_cast<int>(state.range(0));
  const Eigen::Vector2d x(-0.3, 0.1), y(0.5, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(funk::funk_f3(body, x, y, options).value);
}
BENCHMARK(BM_F3_Disk)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

hyp::GeodesicDomain pentagon() {
  std::vector<hyp::HGeodesicLine> lines;
  for (int i = 0; i < 5; ++i) {
    const double a = 2.0 * M_PI * i / 5, r = 1.0;
    lines.emplace_back(hyp::Vec3(std::cosh(r) * std::cos(a), std::cosh(r) * std::sin(a), std::sinh(r)));
  }
  return hyp::GeodesicDomain::make(lines, hyp::HPoint::origin());
}

void BM_WpF2(benchmark::State& state) {
  const auto d = pentagon();
  const auto x = hyp::HPoint::from_disk(Eigen::Vector2d(0.1, 0.2));
  const auto y = hyp::HPoint::from_disk(Eigen::Vector2d(-0.2, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(model::wp_f2(d, x, y).raw);
}
BENCHMARK(BM_WpF2);

void BM_Phi1(benchmark::State& state) {
  const auto d = pentagon();
  const auto x = hyp::HPoint::from_disk(Eigen::Vector2d(0.1, 0.2));
  const auto y = hyp::HPoint::from_disk(Eigen::Vector2d(-0.2, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(model::phi1(d, x, y).value);
}
BENCHMARK(BM_Phi1);

void BM_WpF3Estimate(benchmark::State& state) {
  const auto d = pentagon();
  model::EstimateOptions options;
  options.restarts = 1;
  const auto x = hyp::HPoint::from_disk(Eigen::Vector2d(0.1, 0.2));
  const auto y = hyp::HPoint::from_disk(Eigen::Vector2d(-0.2, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(model::wp_f3_estimate(d, x, y, options).value);
}
BENCHMARK(BM_WpF3Estimate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
