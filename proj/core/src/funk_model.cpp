#include "funkspace/funk_model.hpp"

#include "funkspace/numerics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace funkspace::model {

using hyp::minkowski;
using hyp::Vec3;

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::F2Raw: return "F2raw";
    case Formulation::F2: return "F2";
    case Formulation::Phi1: return "phi1";
    case Formulation::F1Est: return "F1est";
    case Formulation::F3Est: return "F3est";
    case Formulation::Hilbert: return "Hilbert";
  }
  return "?";
}

namespace {

void require_interior(const GeodesicDomain& domain, const HPoint& p) {
  if (!hyp::domain_contains(domain, p)) {
    throw Error(ErrorCode::PointNotInterior, "point not inside the domain");
  }
}

// Distance from an interior point to a boundary line.
double boundary_distance(const HPoint& p, const hyp::HGeodesicLine& line) {
  return std::asinh(-minkowski(p.coords(), line.normal()));
}

// Projects v onto the tangent plane at p; returns the projection and its norm.
std::pair<Vec3, double> tangential(const HPoint& p, const Vec3& v) {
  const Vec3 t = v + minkowski(v, p.coords()) * p.coords();
  return {t, std::sqrt(std::max(0.0, minkowski(t, t)))};
}

using Integrand = std::function<double(const HTangent&)>;

double segment_integral(const HPoint& a, const HPoint& b, const Integrand& density, double tol) {
  const double len = hyp::h_dist(a, b);
  if (len == 0.0) return 0.0;
  const auto start = hyp::log_map(a, b).tangent;
  return numerics::integrate(
      [&](double s) {
        const HPoint p = hyp::exp_map(start, s);
        auto [v, n] = tangential(p, hyp::geodesic_velocity(start, s));
        return density(HTangent{p, v / n});
      },
      0.0, len, tol);
}

double path_integral(const GeodesicDomain& domain, const HPiecewisePath& path,
                     const Integrand& density, double tol) {
  if (path.knots.size() < 2) throw Error(ErrorCode::InvalidArgument, "path needs two knots");
  for (const auto& k : path.knots) require_interior(domain, k);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.knots.size(); ++i) {
    total += segment_integral(path.knots[i], path.knots[i + 1], density, tol);
  }
  return total;
}

struct DescentState {
  std::vector<HPoint> knots;
  std::vector<double> segments;
  double total = 0.0;
};

// Pattern search on the (p1, p2) chart of the hyperboloid: each interior knot
// is moved along the chart axes and lifted back to the sheet.
class PathDescent {
 public:
  PathDescent(const GeodesicDomain& domain, Integrand density, const EstimateOptions& options)
      : domain_(domain), density_(std::move(density)), options_(options) {}

  DescentState state(std::vector<HPoint> knots) const {
    DescentState s;
    s.knots = std::move(knots);
    for (std::size_t i = 0; i + 1 < s.knots.size(); ++i) {
      s.segments.push_back(segment(s.knots[i], s.knots[i + 1]));
      s.total += s.segments.back();
    }
    return s;
  }

  void run(DescentState& s, double initial_step, double min_step) const {
    constexpr int kMaxSweeps = 16;
    double h = initial_step;
    int sweeps = 0;
    while (h >= min_step) {
      double sweep_gain = 0.0;
      for (std::size_t k = 1; k + 1 < s.knots.size(); ++k) {
        for (int axis = 0; axis < 2; ++axis) {
          for (double sign : {1.0, -1.0}) {
            double step = sign * h;
            for (int extend = 0; extend < 20; ++extend) {
              Vec3 c = s.knots[k].coords();
              c(axis) += step;
              c(2) = std::sqrt(1.0 + c(0) * c(0) + c(1) * c(1));
              const HPoint cand = HPoint::normalized(c);
              if (!hyp::domain_contains(domain_, cand)) break;
              const double left = segment(s.knots[k - 1], cand);
              const double right = segment(cand, s.knots[k + 1]);
              const double gain = s.segments[k - 1] + s.segments[k] - left - right;
              if (!(gain > options_.tolerance)) break;
              s.knots[k] = cand;
              s.segments[k - 1] = left;
              s.segments[k] = right;
              sweep_gain += gain;
              step *= 2.0;
            }
          }
        }
      }
      if (sweep_gain <= options_.tolerance || ++sweeps == kMaxSweeps) {
        h *= 0.5;
        sweeps = 0;
      }
    }
    s.total = 0.0;
    for (double v : s.segments) s.total += v;
  }

 private:
  double segment(const HPoint& a, const HPoint& b) const {
    return segment_integral(a, b, density_, options_.segment_tol);
  }

  const GeodesicDomain& domain_;
  Integrand density_;
  EstimateOptions options_;
};

double estimate(const GeodesicDomain& domain, const HPoint& x, const HPoint& y,
                const Integrand& density, const EstimateOptions& options) {
  require_interior(domain, x);
  require_interior(domain, y);
  const int k = std::max(0, options.knot_count);
  const HPiecewisePath straight = geodesic_path(x, y, k);
  const PathDescent exact(domain, density, options);
  const double straight_total = exact.state(straight.knots).total;
  const double len = hyp::h_dist(x, y);
  if (len == 0.0 || k == 0) return straight_total;

  // The search runs on cheaper quadrature; the winner is re-evaluated.
  EstimateOptions search_options = options;
  search_options.segment_tol = std::max(options.segment_tol, 1e-7);
  const PathDescent descent(domain, density, search_options);
  DescentState best = descent.state(straight.knots);

  const Eigen::Vector2d chart_delta(x.coords()(0) - y.coords()(0), x.coords()(1) - y.coords()(1));
  const double chart_len = std::max(chart_delta.norm(), 1e-6);
  const double initial_step = 0.25 * chart_len / (k + 1);
  const double min_step = 1e-7 * chart_len;
  descent.run(best, initial_step, min_step);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<HPoint> knots = straight.knots;
    for (int i = 1; i <= k; ++i) {
      double amp = options.perturbation * len;
      for (int attempt = 0; attempt < 30; ++attempt, amp *= 0.5) {
        const HPoint& base = straight.knots[static_cast<std::size_t>(i)];
        auto [dir, n] = tangential(base, Vec3(normal(rng), normal(rng), 0.0));
        if (!(n > 0.0)) continue;
        const HPoint cand = hyp::exp_map(HTangent{base, dir / n}, std::abs(amp * normal(rng)));
        if (hyp::domain_contains(domain, cand)) {
          knots[static_cast<std::size_t>(i)] = cand;
          break;
        }
      }
    }
    DescentState s = descent.state(std::move(knots));
    descent.run(s, initial_step, min_step);
    if (s.total < best.total) best = std::move(s);
  }
  return std::min(straight_total, exact.state(std::move(best.knots)).total);
}

}  // namespace

std::optional<FirstHit> first_hit(const GeodesicDomain& domain, const HPoint& x,
                                  const HTangent& xi) {
  std::optional<FirstHit> best;
  for (std::size_t i = 0; i < domain.boundaries.size(); ++i) {
    const auto hit = hyp::ray_hit_geodesic(x, xi, domain.boundaries[i]);
    if (hit && (!best || hit->s < best->hit.s - 1e-12)) best = FirstHit{i, *hit};
  }
  return best;
}

ModelFunkValue wp_f2(const GeodesicDomain& domain, const HPoint& x, const HPoint& y) {
  require_interior(domain, x);
  require_interior(domain, y);
  ModelFunkValue out;
  out.formulation = Formulation::F2;
  if (x.coords() == y.coords()) return out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < domain.boundaries.size(); ++i) {
    const auto& b = domain.boundaries[i];
    const double v = std::log(boundary_distance(x, b) / boundary_distance(y, b));
    if (v > best) {
      best = v;
      out.attained_at = i;
    }
  }
  out.raw = best;
  out.value = std::max(0.0, best);
  out.nonneg_violated = best < 0.0;
  return out;
}

ModelFunkValue phi1(const GeodesicDomain& domain, const HPoint& x, const HPoint& y) {
  require_interior(domain, x);
  require_interior(domain, y);
  ModelFunkValue out;
  out.formulation = Formulation::Phi1;
  if (x.coords() == y.coords()) return out;
  const auto ray = hyp::log_map(x, y);
  const auto hit = first_hit(domain, x, ray.tangent);
  if (!hit) return out;
  // x, y and T lie on one geodesic with y between: d(y, T) = d(x, T) - d(x, y).
  out.value = -std::log1p(-ray.length / hit->hit.s);
  out.raw = out.value;
  out.attained_at = hit->boundary;
  return out;
}

double p_tilde(const GeodesicDomain& domain, const HTangent& xi) {
  require_interior(domain, xi.base);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& b : domain.boundaries) {
    const auto nu = hyp::normal_field(xi.base, b);
    best = std::max(best, minkowski(nu.vec, xi.vec) / boundary_distance(xi.base, b));
  }
  return best;
}

double p_hat(const GeodesicDomain& domain, const HTangent& xi) {
  require_interior(domain, xi.base);
  auto [v, n] = tangential(xi.base, xi.vec);
  if (!(n > 0.0)) return 0.0;
  const auto hit = first_hit(domain, xi.base, HTangent{xi.base, v / n});
  return hit ? n / hit->hit.s : 0.0;
}

double length_tilde(const GeodesicDomain& domain, const HPiecewisePath& path, double segment_tol) {
  return path_integral(
      domain, path, [&](const HTangent& t) { return p_tilde(domain, t); }, segment_tol);
}

double length_hat(const GeodesicDomain& domain, const HPiecewisePath& path, double segment_tol) {
  return path_integral(
      domain, path, [&](const HTangent& t) { return p_hat(domain, t); }, segment_tol);
}

HPiecewisePath geodesic_path(const HPoint& x, const HPoint& y, int knot_count) {
  HPiecewisePath path;
  path.knots.push_back(x);
  const double len = hyp::h_dist(x, y);
  if (len > 0.0) {
    const auto start = hyp::log_map(x, y).tangent;
    for (int i = 1; i <= knot_count; ++i) {
      path.knots.push_back(hyp::exp_map(start, len * i / (knot_count + 1)));
    }
  } else {
    for (int i = 1; i <= knot_count; ++i) path.knots.push_back(x);
  }
  path.knots.push_back(y);
  return path;
}

ModelFunkValue wp_f3_estimate(const GeodesicDomain& domain, const HPoint& x, const HPoint& y,
                              const EstimateOptions& options) {
  ModelFunkValue out;
  out.formulation = Formulation::F3Est;
  out.value = estimate(
      domain, x, y, [&](const HTangent& t) { return p_tilde(domain, t); }, options);
  out.raw = out.value;
  out.nonneg_violated = out.value < 0.0;
  return out;
}

ModelFunkValue wp_f1_estimate(const GeodesicDomain& domain, const HPoint& x, const HPoint& y,
                              const EstimateOptions& options) {
  ModelFunkValue out;
  out.formulation = Formulation::F1Est;
  out.value = estimate(
      domain, x, y, [&](const HTangent& t) { return p_hat(domain, t); }, options);
  out.raw = out.value;
  return out;
}

ModelFunkValue wp_hilbert(const GeodesicDomain& domain, const HPoint& x, const HPoint& y) {
  ModelFunkValue out;
  out.formulation = Formulation::Hilbert;
  out.value = 0.5 * (wp_f2(domain, x, y).raw + wp_f2(domain, y, x).raw);
  if (x.coords() == y.coords()) out.value = 0.0;
  out.raw = out.value;
  return out;
}

}  // namespace funkspace::model
