#include "funkspace/commands.hpp"

#include "funkspace/funk.hpp"
#include "funkspace/funk_model.hpp"
#include "funkspace/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

namespace funkspace::io {

using nlohmann::json;

namespace {

struct MetricName {
  Metric metric;
  std::string_view name;
};

constexpr MetricName kMetricNames[] = {
    {Metric::F1, "f1"},         {Metric::F2, "f2"},       {Metric::F3, "f3"},
    {Metric::Hilbert, "hilbert"}, {Metric::CrossRatio, "cross-ratio"}, {Metric::Phi1, "phi1"},
    {Metric::WpF1, "wp-f1"},    {Metric::WpF2, "wp-f2"},  {Metric::WpF3, "wp-f3"},
    {Metric::WpHilbert, "wp-hilbert"},
};

json vec_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json euclid_attained(const funk::FunkValue& v) {
  if (const auto* hit = std::get_if<funk::BoundaryHit>(&v.attained_at)) {
    json out = {{"boundary_point", vec_json(hit->point)}, {"t_exit", hit->t_exit}};
    if (!hit->active_facets.empty()) out["active_facets"] = hit->active_facets;
    return out;
  }
  if (const auto* h = std::get_if<funk::Hyperplane>(&v.attained_at)) {
    json out = {{"normal", vec_json(h->normal)}, {"offset", h->offset}};
    if (v.facet) out["facet"] = *v.facet;
    return out;
  }
  return nullptr;
}

json model_record(const model::ModelFunkValue& v, bool with_raw) {
  json out = {{"value", v.value}, {"formulation", model::to_string(v.formulation)}};
  if (with_raw) {
    out["raw"] = v.raw;
    out["nonneg_violated"] = v.nonneg_violated;
  }
  out["attained_at"] = v.attained_at ? json{{"boundary", *v.attained_at}} : json(nullptr);
  return out;
}

// Metric along rays from a center, as a function of the ray parameter.
using RayMetric = std::function<double(double)>;

struct RaySolve {
  std::optional<double> t;
};

// Finds the first parameter where metric reaches `radius`. Candidates
// approach `t_max` geometrically (or grow without bound when t_max is
// infinite); the bracket is then refined by bisection.
RaySolve solve_along_ray(const RayMetric& metric, double radius, double t_max, double unit,
                         double t_cap) {
  double lo = 0.0;
  std::optional<double> hi;
  for (int k = 1; k <= 60; ++k) {
    const double t = std::isfinite(t_max) ? t_max * (1.0 - std::ldexp(1.0, -k))
                                          : unit * std::ldexp(1.0, k - 4);
    if (t > t_cap) break;
    double v;
    try {
      v = metric(t);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::PointNotInterior) break;
      throw;
    }
    if (v >= radius) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (!hi) return {};
  double h = *hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + h);
    const double v = metric(mid);
    if (std::abs(v - radius) <= 1e-9) return {mid};
    (v < radius ? lo : h) = mid;
    if (h - lo <= 1e-15 * std::max(1.0, h)) break;
  }
  return {0.5 * (lo + h)};
}

std::string fixed(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12f", v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos) s = "0.000000000000";
  return s;
}

// Boundary outline of a 2D body, clipped to `lo..hi` when unbounded.
std::vector<Eigen::Vector2d> body_outline(const euclid::ConvexBody& body, const Eigen::Vector2d& lo,
                                          const Eigen::Vector2d& hi) {
  std::vector<Eigen::Vector2d> out;
  if (const auto* poly = body.as_polytope()) {
    std::vector<euclid::Hyperplane> lines = poly->halfspaces;
    if (!body.bounded()) {
      lines.push_back({Eigen::Vector2d(1, 0), hi.x()});
      lines.push_back({Eigen::Vector2d(-1, 0), -lo.x()});
      lines.push_back({Eigen::Vector2d(0, 1), hi.y()});
      lines.push_back({Eigen::Vector2d(0, -1), -lo.y()});
    }
    const double tol = 1e-9 * std::max(1.0, body.scale());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        Eigen::Matrix2d m;
        m.row(0) = lines[i].normal.transpose();
        m.row(1) = lines[j].normal.transpose();
        if (std::abs(m.determinant()) < 1e-12) continue;
        const Eigen::Vector2d p = m.inverse() * Eigen::Vector2d(lines[i].offset, lines[j].offset);
        bool inside = true;
        for (const auto& l : lines) inside = inside && l.gap(p) >= -tol;
        if (!inside) continue;
        bool dup = false;
        for (const auto& q : out) dup = dup || (q - p).norm() < 1e-9;
        if (!dup) out.push_back(p);
      }
    }
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : out) mean += p;
    if (!out.empty()) mean /= static_cast<double>(out.size());
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
      return std::atan2(a.y() - mean.y(), a.x() - mean.x()) <
             std::atan2(b.y() - mean.y(), b.x() - mean.x());
    });
    return out;
  }
  constexpr int n = 256;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    const Eigen::Vector2d dir(std::cos(a), std::sin(a));
    const auto hit = euclid::ray_exit(body, body.witness(), dir);
    if (hit) out.push_back(hit->point);
  }
  return out;
}

void require_2d(const Scene& scene) {
  if (scene.space == Space::Euclidean && scene.body->dim() != 2) {
    throw Error(ErrorCode::InvalidArgument, "rendering needs a 2D body");
  }
}

void draw_scene(SvgWriter& svg, const Scene& scene, const Eigen::Vector2d& lo,
                const Eigen::Vector2d& hi) {
  if (scene.space == Space::Euclidean) {
    svg.polygon(body_outline(*scene.body, lo, hi), "body");
  } else {
    svg.circle(Eigen::Vector2d::Zero(), 1.0, "ideal");
    for (const auto& line : scene.domain->boundaries) {
      const auto [a, b] = line.ideal_endpoints();
      const auto& n = line.normal();
      if (std::abs(n(2)) < 1e-12) {
        svg.segment(a, b, "boundary");
      } else {
        svg.arc(a, b, Eigen::Vector2d(n(0), n(1)) / n(2), 1.0 / std::abs(n(2)), "boundary");
      }
    }
  }
}

void draw_ball(SvgWriter& svg, const BallResult& ball) {
  std::vector<Eigen::Vector2d> pts;
  bool complete = true;
  for (const auto& s : ball.samples) {
    if (s.point) {
      pts.push_back(*s.point);
    } else {
      complete = false;
    }
  }
  svg.polygon(pts, "ball", complete);
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> view_window(const Scene& scene) {
  if (scene.space == Space::Hyperbolic2) {
    return {Eigen::Vector2d(-1.02, -1.02), Eigen::Vector2d(1.02, 1.02)};
  }
  const auto& body = *scene.body;
  Eigen::Vector2d lo = body.witness(), hi = body.witness();
  auto grow = [&](const Eigen::Vector2d& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  for (const auto& [name, p] : scene.points) grow(p);
  if (body.bounded()) {
    for (int i = 0; i < 64; ++i) {
      const double a = 2.0 * M_PI * i / 64;
      if (const auto hit = euclid::ray_exit(body, body.witness(), Eigen::Vector2d(std::cos(a), std::sin(a)))) {
        grow(hit->point);
      }
    }
    if (const auto* poly = body.as_polytope()) {
      (void)poly;
      for (const auto& v : body_outline(body, lo, hi)) grow(v);
    }
  } else {
    const double r = 2.0 * body.scale();
    grow(body.witness() + Eigen::Vector2d(r, r));
    grow(body.witness() - Eigen::Vector2d(r, r));
  }
  const Eigen::Vector2d pad = 0.05 * (hi - lo).cwiseMax(Eigen::Vector2d(1e-3, 1e-3));
  return {lo - pad, hi + pad};
}

}  // namespace

Metric parse_metric(std::string_view name) {
  for (const auto& m : kMetricNames) {
    if (m.name == name) return m.metric;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown metric \"" + std::string(name) + "\"");
}

std::string_view to_string(Metric m) {
  for (const auto& entry : kMetricNames) {
    if (entry.metric == m) return entry.name;
  }
  return "?";
}

Space metric_space(Metric m) {
  switch (m) {
    case Metric::F1:
    case Metric::F2:
    case Metric::F3:
    case Metric::Hilbert:
    case Metric::CrossRatio:
      return Space::Euclidean;
    default:
      return Space::Hyperbolic2;
  }
}

json cmd_dist(const Scene& scene, const std::string& from, const std::string& to, Metric metric,
              const DistOptions& options) {
  scene.point(from);
  scene.point(to);
  if (metric_space(metric) != scene.space) {
    throw Error(ErrorCode::MetricSpaceMismatch, "metric " + std::string(to_string(metric)) +
                                                    " is not defined on a " +
                                                    std::string(to_string(scene.space)) + " scene");
  }
  json rec = {{"metric", to_string(metric)}, {"from", from}, {"to", to},
              {"space", to_string(scene.space)}};
  json tol = {{"interior_margin", 1e-9}};

  if (scene.space == Space::Euclidean) {
    const auto& body = *scene.body;
    const auto x = scene.euclid_point(from);
    const auto y = scene.euclid_point(to);
    tol["active_tolerance"] = euclid::kActiveTolerance;
    switch (metric) {
      case Metric::F1: {
        const auto v = funk::funk_f1(body, x, y);
        rec["value"] = v.value;
        rec["formulation"] = funk::to_string(v.formulation);
        rec["attained_at"] = euclid_attained(v);
        break;
      }
      case Metric::F2: {
        const auto v = funk::funk_f2(body, x, y);
        rec["value"] = v.value;
        rec["raw"] = v.raw;
        rec["formulation"] = funk::to_string(v.formulation);
        rec["attained_at"] = euclid_attained(v);
        if (body.kind() == euclid::ConvexBody::Kind::Polytope) {
          tol["method"] = "exact facet maximum";
        } else {
          const funk::F2Options o;
          tol["method"] = "multistart ascent";
          tol["random_starts"] = o.random_starts;
          tol["grad_tol"] = o.grad_tol;
        }
        break;
      }
      case Metric::F3: {
        funk::F3Options o;
        o.knot_count = options.knot_count;
        o.restarts = options.restarts;
        const auto v = funk::funk_f3(body, x, y, o);
        rec["value"] = v.value;
        rec["formulation"] = funk::to_string(v.formulation);
        rec["attained_at"] = nullptr;
        tol["knot_count"] = o.knot_count;
        tol["restarts"] = o.restarts;
        tol["improvement_tol"] = o.tolerance;
        break;
      }
      case Metric::Hilbert: {
        const auto v = funk::hilbert(body, x, y);
        rec["value"] = v.value;
        rec["formulation"] = funk::to_string(v.formulation);
        rec["attained_at"] = nullptr;
        break;
      }
      case Metric::CrossRatio:
        rec["value"] = funk::cross_ratio_log(body, x, y);
        rec["formulation"] = "cross-ratio";
        rec["attained_at"] = nullptr;
        break;
      default:
        break;
    }
  } else {
    const auto& domain = *scene.domain;
    const auto x = scene.hyp_point(from);
    const auto y = scene.hyp_point(to);
    model::EstimateOptions o;
    o.knot_count = options.knot_count;
    o.restarts = options.restarts;
    json r;
    switch (metric) {
      case Metric::Phi1: r = model_record(model::phi1(domain, x, y), false); break;
      case Metric::WpF2: r = model_record(model::wp_f2(domain, x, y), true); break;
      case Metric::WpHilbert: r = model_record(model::wp_hilbert(domain, x, y), false); break;
      case Metric::WpF1:
        r = model_record(model::wp_f1_estimate(domain, x, y, o), false);
        break;
      case Metric::WpF3:
        r = model_record(model::wp_f3_estimate(domain, x, y, o), false);
        break;
      default:
        break;
    }
    if (metric == Metric::WpF1 || metric == Metric::WpF3) {
      tol["knot_count"] = o.knot_count;
      tol["restarts"] = o.restarts;
      tol["improvement_tol"] = o.tolerance;
      tol["segment_tol"] = o.segment_tol;
    }
    rec.update(r);
  }
  rec["tolerance_info"] = tol;
  return rec;
}

BallResult cmd_ball(const Scene& scene, const std::string& center, double radius, int samples,
                    Metric metric) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (samples < 8) throw Error(ErrorCode::InvalidArgument, "samples must be at least 8");
  if (metric_space(metric) != scene.space) {
    throw Error(ErrorCode::MetricSpaceMismatch, "metric does not match the scene space");
  }
  require_2d(scene);
  BallResult out{center, radius, metric, {}};

  if (scene.space == Space::Euclidean) {
    const auto& body = *scene.body;
    const auto c = scene.euclid_point(center);
    std::function<double(const Eigen::VectorXd&)> f;
    switch (metric) {
      case Metric::F1: f = [&](const auto& y) { return funk::funk_f1(body, c, y).value; }; break;
      case Metric::F2: f = [&](const auto& y) { return funk::funk_f2(body, c, y).value; }; break;
      case Metric::Hilbert: f = [&](const auto& y) { return funk::hilbert(body, c, y).value; }; break;
      default:
        throw Error(ErrorCode::InvalidArgument, "ball supports f1, f2 and hilbert on euclidean scenes");
    }
    for (int i = 0; i < samples; ++i) {
      BallSample s;
      s.angle = 2.0 * M_PI * i / samples;
      const Eigen::Vector2d dir(std::cos(s.angle), std::sin(s.angle));
      const double t_max = euclid::radial_function(body, c, dir);
      const auto solved = solve_along_ray(
          [&](double t) { return f(c + t * dir); }, radius, t_max, body.scale(),
          std::numeric_limits<double>::infinity());
      if (solved.t) {
        s.point = Eigen::Vector2d(c + *solved.t * dir);
      } else {
        s.unbounded = true;
      }
      out.samples.push_back(s);
    }
    return out;
  }

  const auto& domain = *scene.domain;
  const auto c = scene.hyp_point(center);
  std::function<double(const hyp::HPoint&)> f;
  switch (metric) {
    case Metric::WpF2: f = [&](const auto& y) { return model::wp_f2(domain, c, y).value; }; break;
    case Metric::WpHilbert:
      f = [&](const auto& y) { return model::wp_hilbert(domain, c, y).value; };
      break;
    case Metric::Phi1: f = [&](const auto& y) { return model::phi1(domain, c, y).value; }; break;
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "ball supports wp-f2, wp-hilbert and phi1 on hyperbolic scenes");
  }
  for (int i = 0; i < samples; ++i) {
    BallSample s;
    s.angle = 2.0 * M_PI * i / samples;
    const auto dir = hyp::unit_tangent(c, s.angle);
    const auto hit = model::first_hit(domain, c, dir);
    const double s_max = hit ? hit->hit.s : std::numeric_limits<double>::infinity();
    const auto solved = solve_along_ray([&](double t) { return f(hyp::exp_map(dir, t)); }, radius,
                                        s_max, 1.0, 30.0);
    if (solved.t) {
      s.point = hyp::exp_map(dir, *solved.t).to_disk();
    } else {
      s.unbounded = true;
    }
    out.samples.push_back(s);
  }
  return out;
}

std::string ball_csv(const BallResult& ball) {
  std::ostringstream out;
  out << "index,angle,x,y,status\n";
  for (std::size_t i = 0; i < ball.samples.size(); ++i) {
    const auto& s = ball.samples[i];
    out << i << ',' << fixed(s.angle) << ',';
    if (s.point) {
      out << fixed(s.point->x()) << ',' << fixed(s.point->y()) << ",ok\n";
    } else {
      out << ",,unbounded\n";
    }
  }
  return out.str();
}

std::string render_svg(const Scene& scene, const RenderOptions& options) {
  require_2d(scene);
  const auto [lo, hi] = view_window(scene);
  SvgWriter svg(lo, hi, options.size);
  draw_scene(svg, scene, lo, hi);
  for (const auto& [a, b] : options.geodesics) {
    if (scene.space == Space::Euclidean) {
      svg.segment(scene.euclid_point(a), scene.euclid_point(b), "geodesic");
    } else {
      const auto path = model::geodesic_path(scene.hyp_point(a), scene.hyp_point(b), 62);
      std::vector<Eigen::Vector2d> pts;
      for (const auto& k : path.knots) pts.push_back(k.to_disk());
      svg.polyline(pts, "geodesic");
    }
  }
  for (const auto& b : options.balls) {
    draw_ball(svg, cmd_ball(scene, b.center, b.radius, b.samples, b.metric));
  }
  for (const auto& [name, p] : scene.points) svg.marker(p, name);
  return svg.str();
}

std::string ball_svg(const Scene& scene, const BallResult& ball) {
  require_2d(scene);
  const auto [lo, hi] = view_window(scene);
  SvgWriter svg(lo, hi);
  draw_scene(svg, scene, lo, hi);
  draw_ball(svg, ball);
  svg.marker(scene.point(ball.center), ball.center);
  return svg.str();
}

}  // namespace funkspace::io
