#pragma once

#include "funkspace/scene.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace funkspace::io {

enum class Metric { F1, F2, F3, Hilbert, CrossRatio, Phi1, WpF1, WpF2, WpF3, WpHilbert };

/// Accepts the CLI spellings: f1, f2, f3, hilbert, cross-ratio, phi1, wp-f1,
/// wp-f2, wp-f3, wp-hilbert.
Metric parse_metric(std::string_view name);
std::string_view to_string(Metric m);
Space metric_space(Metric m);

struct DistOptions {
  int knot_count = 5;
  int restarts = 8;
};

/// Evaluates one metric between two named points; throws UnknownPoint or
/// MetricSpaceMismatch.
nlohmann::json cmd_dist(const Scene& scene, const std::string& from, const std::string& to,
                        Metric metric, const DistOptions& options = {});

struct BallSample {
  double angle = 0.0;
  /// Boundary point of the ball (Euclidean coordinates, or Poincare-disk
  /// coordinates for hyperbolic scenes); empty when unreachable.
  std::optional<Eigen::Vector2d> point;
  /// The metric never reaches the radius along this direction.
  bool unbounded = false;
};

struct BallResult {
  std::string center;
  double radius = 0.0;
  Metric metric = Metric::F1;
  std::vector<BallSample> samples;
};

/// Boundary of {y : metric(center, y) < radius} in `samples` directions, by
/// bracketing and bisection along rays from the center (tolerance 1e-9).
BallResult cmd_ball(const Scene& scene, const std::string& center, double radius, int samples,
                    Metric metric);

std::string ball_csv(const BallResult& ball);

struct RenderOptions {
  struct Ball {
    std::string center;
    double radius = 0.0;
    Metric metric = Metric::F1;
    int samples = 128;
  };
  std::vector<Ball> balls;
  std::vector<std::pair<std::string, std::string>> geodesics;
  int size = 512;
};

std::string render_svg(const Scene& scene, const RenderOptions& options = {});

/// Ball overlaid on the scene.
std::string ball_svg(const Scene& scene, const BallResult& ball);

}  // namespace funkspace::io
