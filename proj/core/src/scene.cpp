#include "funkspace/scene.hpp"

#include "funkspace/numerics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace funkspace::io {

using nlohmann::json;

std::string_view to_string(Space s) {
  return s == Space::Euclidean ? "euclidean" : "hyperbolic2";
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

Eigen::VectorXd vec_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) invalid(what + " must be a non-empty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) invalid(what + " must contain numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  if (!v.allFinite()) invalid(what + " must be finite");
  return v;
}

json vec_to(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

double number_from(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j.at(key).is_number()) invalid(what + "." + key + " must be a number");
  return j.at(key).get<double>();
}

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) invalid(what + " is missing \"" + key + "\"");
  return j.at(key);
}

euclid::ConvexBody polytope_from_json(const json& desc, std::vector<std::string>* warnings,
                                      json& norm) {
  const json& hs_json = field(desc, "halfspaces", "body");
  if (!hs_json.is_array() || hs_json.empty()) invalid("body.halfspaces must be a non-empty array");
  std::vector<euclid::Hyperplane> hs;
  json hs_norm = json::array();
  for (std::size_t i = 0; i < hs_json.size(); ++i) {
    const std::string what = "body.halfspaces[" + std::to_string(i) + "]";
    const Eigen::VectorXd n = vec_from(field(hs_json[i], "normal", what), what + ".normal");
    const double offset = number_from(hs_json[i], "offset", what);
    const double len = n.norm();
    if (!(len > 0.0)) invalid(what + ".normal must be nonzero");
    if (std::abs(len - 1.0) > 1e-6 && warnings != nullptr) {
      warnings->push_back(what + ".normal renormalized (norm " + std::to_string(len) + ")");
    }
    hs.push_back(euclid::Hyperplane{n / len, offset / len});
    if (!hs.empty() && hs.back().normal.size() != hs.front().normal.size()) {
      invalid(what + ".normal has inconsistent dimension");
    }
    hs_norm.push_back({{"normal", vec_to(hs.back().normal)}, {"offset", hs.back().offset}});
  }
  const auto dim = hs.front().normal.size();
  Eigen::VectorXd witness;
  if (desc.contains("witness")) {
    witness = vec_from(desc.at("witness"), "body.witness");
  } else {
    Eigen::MatrixXd A(static_cast<Eigen::Index>(hs.size()), dim);
    Eigen::VectorXd b(static_cast<Eigen::Index>(hs.size()));
    double scale = 1.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      A.row(static_cast<Eigen::Index>(i)) = hs[i].normal.transpose();
      b(static_cast<Eigen::Index>(i)) = hs[i].offset;
      scale = std::max(scale, std::abs(hs[i].offset));
    }
    const auto ball = numerics::chebyshev_center(A, b, scale);
    if (!ball || ball->radius <= 10.0 * euclid::kInteriorMargin * scale) {
      invalid("polytope has empty interior");
    }
    witness = ball->center;
  }
  norm = {{"type", "halfspace_polytope"}, {"halfspaces", hs_norm}};
  if (desc.contains("witness")) norm["witness"] = vec_to(witness);
  return euclid::ConvexBody::polytope(std::move(hs), witness);
}

}  // namespace

euclid::SupportOracle lp_ball_oracle(const Eigen::VectorXd& center, double radius, double p) {
  if (!(p > 1.0) || !(radius > 0.0)) invalid("lp_ball needs p > 1 and radius > 0");
  const double q = p / (p - 1.0);
  euclid::SupportOracle o;
  o.support = [center, radius, q](const Eigen::VectorXd& u) {
    return u.dot(center) + radius * std::pow(u.cwiseAbs().array().pow(q).sum(), 1.0 / q);
  };
  o.boundary_point = [center, radius, q](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    const double norm_q = std::pow(u.cwiseAbs().array().pow(q).sum(), 1.0 / q);
    Eigen::VectorXd z(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double a = std::abs(u(i)) / norm_q;
      z(i) = std::copysign(std::pow(a, q - 1.0), u(i));
    }
    return center + radius * z;
  };
  return o;
}

euclid::ConvexBody body_from_json(const json& desc, std::vector<std::string>* warnings,
                                  json* normalized) {
  if (!desc.is_object()) invalid("body must be an object");
  const json& type_json = field(desc, "type", "body");
  if (!type_json.is_string()) invalid("body.type must be a string");
  const std::string type = type_json.get<std::string>();
  json norm;
  auto finish = [&](euclid::ConvexBody body) {
    if (normalized != nullptr) *normalized = norm;
    return body;
  };

  if (type == "halfspace_polytope") return finish(polytope_from_json(desc, warnings, norm));
  if (type == "box") {
    const auto lo = vec_from(field(desc, "lo", "body"), "body.lo");
    const auto hi = vec_from(field(desc, "hi", "body"), "body.hi");
    if (lo.size() != hi.size() || !(lo.array() < hi.array()).all()) invalid("box needs lo < hi");
    norm = {{"type", "box"}, {"lo", vec_to(lo)}, {"hi", vec_to(hi)}};
    return finish(euclid::ConvexBody::box(lo, hi));
  }
  if (type == "ball") {
    const auto c = vec_from(field(desc, "center", "body"), "body.center");
    const double r = number_from(desc, "radius", "body");
    if (!(r > 0.0)) invalid("ball radius must be positive");
    norm = {{"type", "ball"}, {"center", vec_to(c)}, {"radius", r}};
    return finish(euclid::ConvexBody::ball(c, r));
  }
  if (type == "ellipsoid") {
    const auto c = vec_from(field(desc, "center", "body"), "body.center");
    const auto radii = vec_from(field(desc, "radii", "body"), "body.radii");
    if (radii.size() != c.size()) invalid("ellipsoid radii dimension");
    if (!(radii.array() > 0.0).all()) invalid("ellipsoid radii must be positive");
    Eigen::MatrixXd axes = Eigen::MatrixXd::Identity(c.size(), c.size());
    norm = {{"type", "ellipsoid"}, {"center", vec_to(c)}, {"radii", vec_to(radii)}};
    if (desc.contains("axes")) {
      const json& a = desc.at("axes");
      if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != c.size()) {
        invalid("ellipsoid axes must list one vector per dimension");
      }
      json axes_json = json::array();
      for (std::size_t i = 0; i < a.size(); ++i) {
        const auto col = vec_from(a[i], "body.axes");
        if (col.size() != c.size()) invalid("ellipsoid axis dimension");
        axes.col(static_cast<Eigen::Index>(i)) = col;
        axes_json.push_back(vec_to(col));
      }
      norm["axes"] = axes_json;
    }
    return finish(euclid::ConvexBody::ellipsoid(c, axes, radii));
  }
  if (type == "lp_ball") {
    const auto c = vec_from(field(desc, "center", "body"), "body.center");
    const double r = number_from(desc, "radius", "body");
    const double p = number_from(desc, "p", "body");
    if (c.size() < 2 || c.size() > 3) invalid("lp_ball supports dimension 2 or 3");
    norm = {{"type", "lp_ball"}, {"center", vec_to(c)}, {"radius", r}, {"p", p}};
    const double scale = std::max(r, c.cwiseAbs().maxCoeff());
    return finish(euclid::ConvexBody::oracle(static_cast<int>(c.size()), lp_ball_oracle(c, r, p), c,
                                             scale));
  }
  invalid("unknown body.type \"" + type + "\"");
}

hyp::GeodesicDomain domain_from_json(const json& desc, json* normalized) {
  if (!desc.is_object()) invalid("domain must be an object");
  const json& list = field(desc, "boundaries_disk", "domain");
  if (!list.is_array()) invalid("domain.boundaries_disk must be an array");
  std::vector<hyp::HGeodesicLine> lines;
  json norm_list = json::array();
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string what = "domain.boundaries_disk[" + std::to_string(i) + "]";
    const json& item = list[i];
    if (item.is_object() && item.contains("ideal_endpoints")) {
      const json& ends = item.at("ideal_endpoints");
      if (!ends.is_array() || ends.size() != 2) invalid(what + ".ideal_endpoints needs two points");
      const auto a = vec_from(ends[0], what);
      const auto b = vec_from(ends[1], what);
      if (a.size() != 2 || b.size() != 2) invalid(what + " endpoints must be 2D");
      lines.push_back(hyp::HGeodesicLine::from_ideal_endpoints(a, b));
      norm_list.push_back({{"ideal_endpoints", {vec_to(a), vec_to(b)}}});
    } else if (item.is_object() && item.contains("normal")) {
      const auto n = vec_from(item.at("normal"), what + ".normal");
      if (n.size() != 3) invalid(what + ".normal must have 3 entries (n1, n2, n0)");
      try {
        lines.push_back(hyp::HGeodesicLine::normalized(n));
      } catch (const Error&) {
        invalid(what + ".normal must be spacelike");
      }
      norm_list.push_back({{"normal", vec_to(lines.back().normal())}});
    } else {
      invalid(what + " needs ideal_endpoints or normal");
    }
  }
  json norm = {{"boundaries_disk", norm_list}};
  hyp::HPoint witness;
  if (desc.contains("witness_disk")) {
    const auto w = vec_from(desc.at("witness_disk"), "domain.witness_disk");
    if (w.size() != 2) invalid("domain.witness_disk must be 2D");
    witness = hyp::HPoint::from_disk(w);
    norm["witness_disk"] = vec_to(w);
  } else if (!lines.empty()) {
    // In Klein coordinates each halfplane is linear: n1 k1 + n2 k2 < n0.
    constexpr int kDiskSides = 64;
    const auto m = static_cast<Eigen::Index>(lines.size()) + kDiskSides;
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& n = lines[i].normal();
      const double len = std::hypot(n(0), n(1));
      A.row(static_cast<Eigen::Index>(i)) << n(0) / len, n(1) / len;
      b(static_cast<Eigen::Index>(i)) = n(2) / len;
    }
    for (int k = 0; k < kDiskSides; ++k) {
      const double a = 2.0 * M_PI * k / kDiskSides;
      const auto row = static_cast<Eigen::Index>(lines.size()) + k;
      A.row(row) << std::cos(a), std::sin(a);
      b(row) = std::cos(M_PI / kDiskSides);
    }
    const auto ball = numerics::chebyshev_center(A, b, 1.0);
    if (!ball || ball->radius <= 1e-9) invalid("domain has empty interior");
    const Eigen::Vector2d k = ball->center;
    witness = hyp::HPoint::normalized(hyp::Vec3(k(0), k(1), 1.0));
  }
  if (normalized != nullptr) *normalized = norm;
  return hyp::GeodesicDomain::make(std::move(lines), witness);
}

const Eigen::VectorXd& Scene::point(const std::string& name) const {
  const auto it = points.find(name);
  if (it == points.end()) throw Error(ErrorCode::UnknownPoint, "no point named \"" + name + "\"");
  return it->second;
}

euclid::Point Scene::euclid_point(const std::string& name) const {
  if (space != Space::Euclidean) {
    throw Error(ErrorCode::MetricSpaceMismatch, "scene is not euclidean");
  }
  return point(name);
}

hyp::HPoint Scene::hyp_point(const std::string& name) const {
  if (space != Space::Hyperbolic2) {
    throw Error(ErrorCode::MetricSpaceMismatch, "scene is not hyperbolic2");
  }
  return hyp::HPoint::from_disk(point(name));
}

Scene parse_scene(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "scene must be a JSON object");

  Scene scene;
  const json& space = field(doc, "space", "scene");
  if (space == "euclidean") {
    scene.space = Space::Euclidean;
    scene.body = body_from_json(field(doc, "body", "scene"), &scene.warnings, &scene.description);
  } else if (space == "hyperbolic2") {
    scene.space = Space::Hyperbolic2;
    try {
      scene.domain = domain_from_json(field(doc, "domain", "scene"), &scene.description);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidHPoint) invalid(e.what());
      throw;
    }
  } else {
    invalid("scene.space must be \"euclidean\" or \"hyperbolic2\"");
  }

  if (doc.contains("points")) {
    const json& pts = doc.at("points");
    if (!pts.is_object()) invalid("scene.points must be an object");
    for (const auto& [name, coords] : pts.items()) {
      const Eigen::VectorXd p = vec_from(coords, "points." + name);
      if (scene.space == Space::Euclidean) {
        if (p.size() != scene.body->dim()) invalid("points." + name + " has the wrong dimension");
        if (!euclid::contains_interior(*scene.body, p)) {
          invalid("points." + name + " is not interior to the body");
        }
      } else {
        if (p.size() != 2) invalid("points." + name + " must be a 2D disk point");
        if (!(p.squaredNorm() < 1.0)) invalid("points." + name + " must satisfy |u| < 1");
        if (!hyp::domain_contains(*scene.domain, hyp::HPoint::from_disk(p))) {
          invalid("points." + name + " is not inside the domain");
        }
      }
      scene.points.emplace(name, p);
    }
  }
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) invalid("scene.label must be a string");
    scene.label = doc.at("label").get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) invalid("scene.seed must be a nonnegative integer");
    scene.seed = doc.at("seed").get<std::uint64_t>();
  }
  return scene;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot open scene file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str());
}

json scene_to_json(const Scene& scene) {
  json out;
  out["space"] = to_string(scene.space);
  out[scene.space == Space::Euclidean ? "body" : "domain"] = scene.description;
  json pts = json::object();
  for (const auto& [name, p] : scene.points) pts[name] = vec_to(p);
  out["points"] = pts;
  if (!scene.label.empty()) out["label"] = scene.label;
  if (scene.seed) out["seed"] = *scene.seed;
  return out;
}

std::string serialize_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

}  // namespace funkspace::io
