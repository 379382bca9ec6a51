#include "funkspace/funk.hpp"

#include "funkspace/numerics.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace funkspace::funk {

using euclid::contains_interior;
using euclid::ray_exit;

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::F1: return "F1";
    case Formulation::F2Raw: return "F2raw";
    case Formulation::F2: return "F2";
    case Formulation::F3: return "F3";
    case Formulation::Hilbert: return "Hilbert";
  }
  return "?";
}

namespace {

void require_interior(const ConvexBody& body, const Point& p) {
  if (!contains_interior(body, p)) throw Error(ErrorCode::PointNotInterior, "point not interior");
}

// Support value and its gradient (the boundary point) for smooth bodies.
double smooth_support(const ConvexBody& body, const Vector& u, Vector& grad) {
  if (const auto* e = body.as_ellipsoid()) {
    const Vector w = e->radii.asDiagonal() * (e->axes.transpose() * u);
    const double n = w.norm();
    grad = e->center + e->axes * (e->radii.asDiagonal() * w) / n;
    return u.dot(e->center) + n;
  }
  const auto* o = body.as_oracle();
  grad = o->boundary_point(u);
  return o->support(u);
}

std::vector<Vector> multistart_directions(const ConvexBody& body, const Point& x,
                                          const Vector& dir, int random_starts, unsigned seed) {
  std::vector<Vector> starts;
  if (dir.norm() > 0.0) {
    if (const auto hit = ray_exit(body, x, dir.normalized())) {
      for (const auto& h : hit->active) starts.push_back(h.normal);
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < random_starts; ++i) {
    Vector u(body.dim());
    for (Eigen::Index j = 0; j < u.size(); ++j) u(j) = normal(rng);
    starts.push_back(u.normalized());
  }
  return starts;
}

// Runs the sphere ascent from every start and keeps the best stationary value.
numerics::SphereAscentResult best_ascent(const numerics::SphereObjective& objective,
                                         const std::vector<Vector>& starts, double grad_tol) {
  numerics::SphereAscentResult best;
  best.value = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& s : starts) {
    auto r = numerics::ascend_on_sphere(objective, s, grad_tol);
    if (!r.converged) continue;
    if (!any || r.value > best.value) best = r;
    any = true;
  }
  if (!any) throw Error(ErrorCode::NumericFailure, "no ascent start converged");
  return best;
}

double segment_length(const ConvexBody& body, const Point& a, const Point& b, double tol) {
  const Vector delta = b - a;
  if (delta.norm() == 0.0) return 0.0;
  return numerics::integrate(
      [&](double t) { return finsler_norm(body, a + t * delta, delta); }, 0.0, 1.0, tol);
}

}  // namespace

FunkValue funk_f1(const ConvexBody& body, const Point& x, const Point& y) {
  require_interior(body, x);
  require_interior(body, y);
  FunkValue out;
  out.formulation = Formulation::F1;
  const Vector delta = y - x;
  const double len = delta.norm();
  if (len == 0.0) return out;
  const auto hit = ray_exit(body, x, delta / len);
  if (!hit) return out;
  out.value = -std::log1p(-len / hit->t_exit);
  out.raw = out.value;
  out.attained_at = *hit;
  return out;
}

FunkValue funk_f2(const ConvexBody& body, const Point& x, const Point& y,
                  const F2Options& options) {
  require_interior(body, x);
  require_interior(body, y);
  FunkValue out;
  out.formulation = Formulation::F2;
  if (x == y) return out;

  if (const auto* poly = body.as_polytope()) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly->halfspaces.size(); ++i) {
      const auto& h = poly->halfspaces[i];
      const double v = std::log(h.gap(x) / h.gap(y));
      if (v > best) {
        best = v;
        out.facet = i;
        out.attained_at = h;
      }
    }
    out.raw = best;
    out.value = std::max(0.0, best);
    return out;
  }

  auto objective = [&](const Vector& u, Vector& grad) {
    Vector bp;
    const double h = smooth_support(body, u, bp);
    const double gx = h - u.dot(x);
    const double gy = h - u.dot(y);
    if (!(gx > 0.0 && gy > 0.0)) return -std::numeric_limits<double>::infinity();
    grad = (bp - x) / gx - (bp - y) / gy;
    return std::log(gx / gy);
  };
  const auto starts = multistart_directions(body, x, y - x, options.random_starts, options.seed);
  const auto best = best_ascent(objective, starts, options.grad_tol);
  Vector bp;
  out.attained_at = Hyperplane{best.u, smooth_support(body, best.u, bp)};
  out.raw = best.value;
  out.value = std::max(0.0, best.value);
  return out;
}

double finsler_norm(const ConvexBody& body, const Point& x, const Vector& xi) {
  require_interior(body, x);
  const double n = xi.norm();
  if (n == 0.0) return 0.0;
  const auto hit = ray_exit(body, x, xi / n);
  return hit ? n / hit->t_exit : 0.0;
}

double finsler_norm_dual(const ConvexBody& body, const Point& x, const Vector& xi) {
  require_interior(body, x);
  if (xi.norm() == 0.0) return 0.0;
  if (const auto* poly = body.as_polytope()) {
    double best = 0.0;
    for (const auto& h : poly->halfspaces) best = std::max(best, h.normal.dot(xi) / h.gap(x));
    return best;
  }
  auto objective = [&](const Vector& u, Vector& grad) {
    Vector bp;
    const double gap = smooth_support(body, u, bp) - u.dot(x);
    const double num = u.dot(xi);
    grad = xi / gap - num * (bp - x) / (gap * gap);
    return num / gap;
  };
  const auto starts = multistart_directions(body, x, xi, 8, 0xd0a1u);
  return std::max(0.0, best_ascent(objective, starts, 1e-12).value);
}

double funk_path_length(const ConvexBody& body, const PiecewisePath& path, double segment_tol) {
  if (path.knots.size() < 2) throw Error(ErrorCode::InvalidArgument, "path needs two knots");
  for (const auto& k : path.knots) require_interior(body, k);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.knots.size(); ++i) {
    total += segment_length(body, path.knots[i], path.knots[i + 1], segment_tol);
  }
  return total;
}

namespace {

struct DescentState {
  std::vector<Point> knots;
  std::vector<double> segments;
  double total = 0.0;
};

DescentState make_state(const ConvexBody& body, std::vector<Point> knots, double tol) {
  DescentState s;
  s.knots = std::move(knots);
  for (std::size_t i = 0; i + 1 < s.knots.size(); ++i) {
    s.segments.push_back(segment_length(body, s.knots[i], s.knots[i + 1], tol));
    s.total += s.segments.back();
  }
  return s;
}

// Pattern search over the interior knots: per knot and per coordinate axis, a
// step of size h is tried in both directions and extended while it improves.
// The step halves once a sweep gains nothing or after kMaxSweeps sweeps.
void coordinate_descent(const ConvexBody& body, DescentState& s, double initial_step,
                        double min_step, double improvement_tol, double quad_tol) {
  constexpr int kMaxSweeps = 16;
  const auto dim = s.knots.front().size();
  double h = initial_step;
  int sweeps = 0;
  while (h >= min_step) {
    double sweep_gain = 0.0;
    for (std::size_t k = 1; k + 1 < s.knots.size(); ++k) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (double sign : {1.0, -1.0}) {
          double step = sign * h;
          for (int extend = 0; extend < 20; ++extend) {
            Point cand = s.knots[k];
            cand(j) += step;
            if (!contains_interior(body, cand)) break;
            const double left = segment_length(body, s.knots[k - 1], cand, quad_tol);
            const double right = segment_length(body, cand, s.knots[k + 1], quad_tol);
            const double gain = s.segments[k - 1] + s.segments[k] - left - right;
            if (!(gain > improvement_tol)) break;
            s.knots[k] = cand;
            s.segments[k - 1] = left;
            s.segments[k] = right;
            s.total -= gain;
            sweep_gain += gain;
            step *= 2.0;
          }
        }
      }
    }
    if (sweep_gain <= improvement_tol || ++sweeps >= kMaxSweeps) {
      h *= 0.5;
      sweeps = 0;
    }
  }
}

DescentState f3_search(const ConvexBody& body, const Point& x, const Point& y,
                       const F3Options& options) {
  require_interior(body, x);
  require_interior(body, y);
  // Candidates are compared at a looser tolerance; the winner is re-evaluated.
  constexpr double search_tol = 1e-9;
  constexpr double final_tol = 1e-11;
  const int k = std::max(0, options.knot_count);
  std::vector<Point> straight;
  for (int i = 0; i <= k + 1; ++i) straight.push_back(x + (static_cast<double>(i) / (k + 1)) * (y - x));
  const double len = (y - x).norm();
  DescentState best = make_state(body, straight, final_tol);
  if (len == 0.0 || k == 0) return best;
  const double straight_total = best.total;
  best = make_state(body, straight, search_tol);

  const double initial_step = 0.25 * len / (k + 1);
  const double min_step = 1e-7 * len;
  coordinate_descent(body, best, initial_step, min_step, options.tolerance, search_tol);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<Point> knots = straight;
    for (int i = 1; i <= k; ++i) {
      double amp = options.perturbation * len;
      for (int attempt = 0; attempt < 30; ++attempt, amp *= 0.5) {
        Point cand = straight[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < cand.size(); ++j) cand(j) += amp * normal(rng);
        if (contains_interior(body, cand)) {
          knots[static_cast<std::size_t>(i)] = cand;
          break;
        }
      }
    }
    DescentState s = make_state(body, knots, search_tol);
    coordinate_descent(body, s, initial_step, min_step, options.tolerance, search_tol);
    if (s.total < best.total) best = std::move(s);
  }
  best = make_state(body, std::move(best.knots), final_tol);
  if (best.total > straight_total) return make_state(body, straight, final_tol);
  return best;
}

}  // namespace

FunkValue funk_f3(const ConvexBody& body, const Point& x, const Point& y,
                  const F3Options& options) {
  const auto best = f3_search(body, x, y, options);
  FunkValue out;
  out.formulation = Formulation::F3;
  out.value = best.total;
  out.raw = best.total;
  return out;
}

PiecewisePath funk_f3_path(const ConvexBody& body, const Point& x, const Point& y,
                           const F3Options& options) {
  return PiecewisePath{f3_search(body, x, y, options).knots};
}

FunkValue hilbert(const ConvexBody& body, const Point& x, const Point& y) {
  FunkValue out;
  out.formulation = Formulation::Hilbert;
  out.value = 0.5 * (funk_f1(body, x, y).value + funk_f1(body, y, x).value);
  out.raw = out.value;
  return out;
}

double cross_ratio_log(const ConvexBody& body, const Point& x, const Point& y) {
  require_interior(body, x);
  require_interior(body, y);
  const Vector delta = y - x;
  const double len = delta.norm();
  if (len == 0.0) return 0.0;
  const auto forward = ray_exit(body, x, delta / len);
  const auto backward = ray_exit(body, y, -delta / len);
  if (!forward || !backward) {
    throw Error(ErrorCode::FiniteHitsRequired, "the line through x and y must exit both ways");
  }
  const Point& bxy = forward->point;
  const Point& byx = backward->point;
  return std::log(((x - bxy).norm() * (y - byx).norm()) / ((y - bxy).norm() * (x - byx).norm()));
}

Derivatives derivative_check(const Point& x, const Line& line, double t, const Hyperplane& plane) {
  euclid::distance_to_hyperplane(x, plane);
  const double d = euclid::distance_to_hyperplane(line.at(t), plane);
  const double rate = plane.normal.dot(line.direction);
  return {rate / d, (rate * rate) / (d * d)};
}

ConvexityProfile convexity_profile(const ConvexBody& body, const Point& x, const Line& line,
                                   const std::vector<double>& t_grid, bool reversed) {
  ConvexityProfile out;
  for (double t : t_grid) {
    const Point s = line.at(t);
    out.values.push_back(reversed ? funk_f1(body, s, x).value : funk_f1(body, x, s).value);
  }
  for (std::size_t i = 1; i + 1 < out.values.size(); ++i) {
    const double dd = out.values[i - 1] - 2.0 * out.values[i] + out.values[i + 1];
    out.second_differences.push_back(dd);
    if (dd < -1e-9) out.all_nonneg = false;
  }
  return out;
}

Point hilbert_midpoint(const ConvexBody& body, const Point& p, const Point& q, double tol) {
  require_interior(body, p);
  require_interior(body, q);
  if (p == q) return p;
  double lo = 0.0, hi = 1.0;
  Point m = 0.5 * (p + q);
  for (int it = 0; it < 200; ++it) {
    const double lam = 0.5 * (lo + hi);
    m = p + lam * (q - p);
    const double diff = hilbert(body, p, m).value - hilbert(body, m, q).value;
    if (std::abs(diff) <= tol) break;
    (diff < 0.0 ? lo : hi) = lam;
    if (hi - lo < 1e-17) break;
  }
  return m;
}

}  // namespace funkspace::funk
