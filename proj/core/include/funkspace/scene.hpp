#pragma once

#include "funkspace/convex_body.hpp"
#include "funkspace/hyperbolic.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace funkspace::io {

enum class Space { Euclidean, Hyperbolic2 };

std::string_view to_string(Space s);

/// A problem instance: a convex body (Euclidean) or a geodesic domain
/// (hyperbolic plane), plus named points. Hyperbolic points are stored in
/// Poincare-disk coordinates as written in the file.
struct Scene {
  Space space = Space::Euclidean;
  /// Normalized body/domain description; serializes back verbatim.
  nlohmann::json description;
  std::optional<euclid::ConvexBody> body;
  std::optional<hyp::GeodesicDomain> domain;
  std::map<std::string, Eigen::VectorXd> points;
  std::string label;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> warnings;

  const Eigen::VectorXd& point(const std::string& name) const;
  euclid::Point euclid_point(const std::string& name) const;
  hyp::HPoint hyp_point(const std::string& name) const;
};

/// Parses and validates a scene document. Throws ParseError for malformed
/// JSON and ValidationError for geometric problems.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);

nlohmann::json scene_to_json(const Scene& scene);
std::string serialize_scene(const Scene& scene);

/// Builds a body from its JSON description (see README for the schema).
euclid::ConvexBody body_from_json(const nlohmann::json& desc, std::vector<std::string>* warnings,
                                  nlohmann::json* normalized = nullptr);
hyp::GeodesicDomain domain_from_json(const nlohmann::json& desc,
                                     nlohmann::json* normalized = nullptr);

/// Support oracle for the l^p ball of the given radius (p > 1).
euclid::SupportOracle lp_ball_oracle(const Eigen::VectorXd& center, double radius, double p);

}  // namespace funkspace::io
