#include "funkspace/verify.hpp"

#include "funkspace/error.hpp"
#include "funkspace/funk.hpp"
#include "funkspace/funk_model.hpp"
#include "funkspace/scene.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace funkspace::verify {

using nlohmann::json;

namespace {

using Rng = std::mt19937_64;
using euclid::ConvexBody;
using euclid::Hyperplane;
using euclid::Point;
using euclid::Vector;
using hyp::HGeodesicLine;
using hyp::HPoint;
using hyp::HTangent;
using hyp::Isometry;
using hyp::Vec3;

constexpr double kPi = 3.14159265358979323846;

std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h;
}

class Context {
 public:
  Context(const SuiteOptions& options, std::string_view name)
      : options_(options), name_hash_(fnv1a(name)) {}

  Rng rng(std::int64_t trial) const {
    std::seed_seq seq{static_cast<std::uint32_t>(options_.seed),
                      static_cast<std::uint32_t>(options_.seed >> 32), name_hash_,
                      static_cast<std::uint32_t>(trial)};
    return Rng(seq);
  }

  int count(double factor, int minimum = 1) const {
    return std::max(minimum, static_cast<int>(std::llround(options_.trials * factor)));
  }

  const std::vector<int>& dims() const { return options_.dims; }

 private:
  const SuiteOptions& options_;
  std::uint32_t name_hash_;
};

// Records one check. Violations above the tolerance (or NaN) are failures;
// the first failure keeps its witness.
void tally(PropertyResult& r, double violation, const std::function<json()>& witness) {
  ++r.checks;
  const bool ok = violation <= r.tolerance;
  if (std::isfinite(violation)) r.worst = std::max(r.worst, violation);
  if (!ok) {
    ++r.failures;
    if (r.witness.is_null()) {
      r.witness = witness();
      r.witness["violation"] = std::isfinite(violation) ? json(violation) : json("non-finite");
    }
  }
}

template <class F>
void for_trials(const Context& ctx, PropertyResult& r, int count, F&& body) {
  for (int t = 0; t < count; ++t) {
    Rng rng = ctx.rng(t);
    try {
      body(rng, t);
    } catch (const Error& e) {
      ++r.checks;
      ++r.failures;
      if (r.witness.is_null()) r.witness = {{"trial", t}, {"error", e.what()}};
    }
  }
}

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

Vector gaussian(Rng& rng, int d) {
  std::normal_distribution<double> n01;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = n01(rng);
  return v;
}

Vector unit(Rng& rng, int d) {
  for (;;) {
    Vector v = gaussian(rng, d);
    const double n = v.norm();
    if (n > 1e-6) return v / n;
  }
}

int pick_dim(Rng& rng, const std::vector<int>& dims) {
  return dims[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(dims.size()) - 1))];
}

json vj(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json hj(const HPoint& p) { return vj(p.to_disk()); }

json stats(std::vector<double> v) {
  if (v.empty()) return {{"count", 0}};
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (const double x : v) sum += x;
  return {{"count", v.size()},
          {"min", v.front()},
          {"median", v[v.size() / 2]},
          {"mean", sum / static_cast<double>(v.size())},
          {"max", v.back()}};
}

// ---------------------------------------------------------------------------
// Euclidean instances

struct Body {
  ConvexBody body;
  json desc;
};

Body random_polytope(Rng& rng, int d, bool bounded = true) {
  for (;;) {
    const int m = bounded ? uniform_int(rng, d + 1, 20) : uniform_int(rng, 1, d);
    const Point c = 0.5 * gaussian(rng, d);
    std::vector<Hyperplane> hs;
    json list = json::array();
    for (int i = 0; i < m; ++i) {
      const Vector n = unit(rng, d);
      const double offset = uniform(rng, 0.5, 2.0) + n.dot(c);
      hs.push_back({n, offset});
      list.push_back({{"normal", vj(n)}, {"offset", offset}});
    }
    auto body = ConvexBody::polytope(hs, c);
    if (body.bounded() != bounded) continue;
    return {std::move(body), {{"type", "halfspace_polytope"}, {"halfspaces", list}, {"witness", vj(c)}}};
  }
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int d) {
  Eigen::MatrixXd g(d, d);
  for (int j = 0; j < d; ++j) g.col(j) = gaussian(rng, d);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

Body random_ellipsoid(Rng& rng, int d) {
  const Point c = 0.5 * gaussian(rng, d);
  const Eigen::MatrixXd q = random_orthogonal(rng, d);
  Vector radii(d);
  for (int i = 0; i < d; ++i) radii(i) = uniform(rng, 0.3, 2.0);
  json axes = json::array();
  for (int j = 0; j < d; ++j) axes.push_back(vj(q.col(j)));
  return {ConvexBody::ellipsoid(c, q, radii),
          {{"type", "ellipsoid"}, {"center", vj(c)}, {"radii", vj(radii)}, {"axes", axes}}};
}

Body random_lp_ball(Rng& rng, int d) {
  const Point c = 0.5 * gaussian(rng, d);
  const double radius = uniform(rng, 0.5, 2.0);
  const double p = uniform(rng, 1.5, 4.0);
  const double scale = std::max(radius, c.cwiseAbs().maxCoeff());
  return {ConvexBody::oracle(d, io::lp_ball_oracle(c, radius, p), c, scale),
          {{"type", "lp_ball"}, {"center", vj(c)}, {"radius", radius}, {"p", p}}};
}

enum Kinds : unsigned { kPolytope = 1, kEllipsoid = 2, kOracle = 4 };

Body random_body(Rng& rng, int d, unsigned kinds) {
  std::vector<unsigned> options;
  for (const unsigned k : {kPolytope, kEllipsoid, kOracle}) {
    if (kinds & k) options.push_back(k);
  }
  switch (options[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(options.size()) - 1))]) {
    case kPolytope: return random_polytope(rng, d);
    case kEllipsoid: return random_ellipsoid(rng, d);
    default: return random_lp_ball(rng, d);
  }
}

Point interior_point(Rng& rng, const ConvexBody& body, double max_fraction = 0.9) {
  const Point& w = body.witness();
  for (int i = 0; i < 100; ++i) {
    const Vector u = unit(rng, body.dim());
    double t = euclid::radial_function(body, w, u);
    if (!std::isfinite(t)) t = 2.0 * body.scale();
    const Point p = w + uniform(rng, 0.0, max_fraction) * t * u;
    if (euclid::contains_interior(body, p)) return p;
  }
  return w;
}

struct Affine {
  Eigen::MatrixXd a;
  Vector b;
};

Affine random_affine(Rng& rng, int d) {
  Vector s(d);
  for (int i = 0; i < d; ++i) s(i) = uniform(rng, 0.5, 2.0);
  return {random_orthogonal(rng, d) * s.asDiagonal() * random_orthogonal(rng, d), gaussian(rng, d)};
}

json affine_json(const Affine& f) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < f.a.rows(); ++i) rows.push_back(vj(f.a.row(i).transpose()));
  return {{"matrix", rows}, {"shift", vj(f.b)}};
}

// Signed membership residual: positive inside, zero on the boundary.
double membership_residual(const ConvexBody& body, const Point& p) {
  if (const auto* poly = body.as_polytope()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& h : poly->halfspaces) best = std::min(best, h.gap(p));
    return best / body.scale();
  }
  if (const auto* e = body.as_ellipsoid()) {
    const Vector z = (e->axes.transpose() * (p - e->center)).cwiseQuotient(e->radii);
    return 1.0 - z.norm();
  }
  return euclid::oracle_min_gap(body, p).first / body.scale();
}

// ---------------------------------------------------------------------------
// Euclidean properties

void klein_identity(const Context&, PropertyResult& r) {
  const auto disk = ConvexBody::ball(Point::Zero(2), 1.0);
  json values = json::array();
  for (int i = 1; i <= 9; ++i) {
    const double radius = i / 10.0;
    Point y(2);
    y << radius, 0.0;
    const double h = funk::hilbert(disk, Point::Zero(2), y).value;
    values.push_back({{"r", radius}, {"hilbert", h}, {"artanh", std::atanh(radius)}});
    tally(r, std::abs(h - std::atanh(radius)), [&] { return json{{"r", radius}, {"hilbert", h}}; });
  }
  r.details["values"] = values;
}

void check_forms_agree(const Context& ctx, PropertyResult& r, int count,
              const std::function<Body(Rng&, int)>& make) {
  for_trials(ctx, r, count, [&](Rng& rng, int t) {
    const auto inst = make(rng, pick_dim(rng, ctx.dims()));
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    const double f1 = funk::funk_f1(inst.body, x, y).value;
    const double f2 = funk::funk_f2(inst.body, x, y).value;
    tally(r, std::abs(f1 - f2), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"y", vj(y)}, {"f1", f1}, {"f2", f2}};
    });
  });
}

void forms_agree_polytope(const Context& ctx, PropertyResult& r) {
  check_forms_agree(ctx, r, ctx.count(1.0), [](Rng& rng, int d) { return random_polytope(rng, d); });
}

void forms_agree_ellipsoid(const Context& ctx, PropertyResult& r) {
  check_forms_agree(ctx, r, ctx.count(0.3), [](Rng& rng, int d) { return random_ellipsoid(rng, d); });
}

void forms_agree_oracle(const Context& ctx, PropertyResult& r) {
  check_forms_agree(ctx, r, ctx.count(0.1), [](Rng& rng, int d) { return random_lp_ball(rng, d); });
}

void three_representations(const Context& ctx, PropertyResult& r) {
  funk::F3Options options;
  options.restarts = 2;
  r.details["knot_count"] = options.knot_count;
  r.details["restarts"] = options.restarts;
  for_trials(ctx, r, ctx.count(0.1), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = t % 2 == 0 ? random_polytope(rng, d) : random_ellipsoid(rng, d);
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    const double f1 = funk::funk_f1(inst.body, x, y).value;
    const double f3 = funk::funk_f3(inst.body, x, y, options).value;
    tally(r, std::abs(f3 - f1), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"y", vj(y)}, {"f1", f1}, {"f3", f3}};
    });
  });
}

void straight_path_length(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_body(rng, pick_dim(rng, ctx.dims()), kPolytope | kEllipsoid | kOracle);
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    const double f1 = funk::funk_f1(inst.body, x, y).value;
    const double len = funk::funk_path_length(inst.body, {{x, y}});
    tally(r, std::abs(len - f1), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"y", vj(y)}, {"f1", f1}, {"length", len}};
    });
  });
}

void path_lower_bound(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_body(rng, pick_dim(rng, ctx.dims()), kPolytope | kEllipsoid);
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    funk::PiecewisePath path{{x}};
    const int m = uniform_int(rng, 1, 4);
    for (int i = 0; i < m; ++i) path.knots.push_back(interior_point(rng, inst.body));
    path.knots.push_back(y);
    const double f1 = funk::funk_f1(inst.body, x, y).value;
    const double len = funk::funk_path_length(inst.body, path);
    tally(r, f1 - len, [&] {
      json knots = json::array();
      for (const auto& k : path.knots) knots.push_back(vj(k));
      return json{{"trial", t}, {"body", inst.desc}, {"path", knots}, {"f1", f1}, {"length", len}};
    });
  });
}

using EuclidMetric = std::function<double(const ConvexBody&, const Point&, const Point&)>;

void triangle(const Context& ctx, PropertyResult& r, unsigned kinds, const EuclidMetric& f) {
  for_trials(ctx, r, ctx.count(10.0), [&](Rng& rng, int t) {
    const auto inst = random_body(rng, pick_dim(rng, ctx.dims()), kinds);
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    const Point z = interior_point(rng, inst.body);
    const double xy = f(inst.body, x, y), yz = f(inst.body, y, z), xz = f(inst.body, x, z);
    tally(r, xz - xy - yz, [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"y", vj(y)}, {"z", vj(z)},
                  {"xy", xy}, {"yz", yz}, {"xz", xz}};
    });
  });
}

void triangle_f1(const Context& ctx, PropertyResult& r) {
  r.details["bodies"] = "polytope, ellipsoid";
  triangle(ctx, r, kPolytope | kEllipsoid,
           [](const auto& b, const auto& x, const auto& y) { return funk::funk_f1(b, x, y).value; });
}

void triangle_f2(const Context& ctx, PropertyResult& r) {
  r.details["bodies"] = "polytope";
  triangle(ctx, r, kPolytope,
           [](const auto& b, const auto& x, const auto& y) { return funk::funk_f2(b, x, y).value; });
}

void triangle_hilbert(const Context& ctx, PropertyResult& r) {
  r.details["bodies"] = "polytope, ellipsoid";
  triangle(ctx, r, kPolytope | kEllipsoid,
           [](const auto& b, const auto& x, const auto& y) { return funk::hilbert(b, x, y).value; });
}

void weak_axioms(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_body(rng, pick_dim(rng, ctx.dims()), kPolytope | kEllipsoid | kOracle);
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    double v = 0.0;
    v = std::max(v, std::abs(funk::funk_f1(inst.body, x, x).value));
    v = std::max(v, std::abs(funk::funk_f2(inst.body, x, x).value));
    v = std::max(v, std::abs(funk::hilbert(inst.body, x, x).value));
    v = std::max(v, -funk::funk_f1(inst.body, x, y).value);
    v = std::max(v, -funk::funk_f2(inst.body, x, y).value);
    v = std::max(v, -funk::hilbert(inst.body, x, y).value);
    if (t < 3) v = std::max(v, std::abs(funk::funk_f3(inst.body, x, x).value));
    tally(r, v, [&] { return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"y", vj(y)}}; });
  });
}

void square_additivity(const Context&, PropertyResult& r) {
  const auto square = ConvexBody::box(Point::Constant(2, -1.0), Point::Constant(2, 1.0));
  Point x(2), y(2), z(2);
  x << -0.5, 0.0;
  y << 0.0, 0.25;
  z << 0.5, 0.4;
  json values = json::object();
  for (const auto& [name, f] : std::vector<std::pair<std::string, EuclidMetric>>{
           {"f1", [](const auto& b, const auto& p, const auto& q) { return funk::funk_f1(b, p, q).value; }},
           {"f2", [](const auto& b, const auto& p, const auto& q) { return funk::funk_f2(b, p, q).value; }}}) {
    const double xy = f(square, x, y), yz = f(square, y, z), xz = f(square, x, z);
    values[name] = {{"xy", xy}, {"yz", yz}, {"xz", xz}};
    const double v = std::max({std::abs(xy + yz - xz), std::abs(xy - std::log(1.5)),
                               std::abs(yz - std::log(2.0)), std::abs(xz - std::log(3.0))});
    tally(r, v, [&] { return json{{"metric", name}, {"xy", xy}, {"yz", yz}, {"xz", xz}}; });
  }
  r.details["values"] = values;
}

void projectivity(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = t % 4 == 3 ? random_polytope(rng, d, false)
                                 : random_body(rng, d, kPolytope | kEllipsoid | kOracle);
    const Point x = interior_point(rng, inst.body);
    const Vector u = unit(rng, d);
    double t_max = euclid::radial_function(inst.body, x, u);
    if (!std::isfinite(t_max)) t_max = 2.0 * inst.body.scale();
    const double a = uniform(rng, 0.05, 0.45) * t_max;
    const double b = a + uniform(rng, 0.05, 0.45) * t_max;
    const Point y = x + a * u, z = x + b * u;
    const double xy = funk::funk_f1(inst.body, x, y).value;
    const double yz = funk::funk_f1(inst.body, y, z).value;
    const double xz = funk::funk_f1(inst.body, x, z).value;
    tally(r, std::abs(xy + yz - xz), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"y", vj(y)}, {"z", vj(z)}};
    });
  });
}

void derivative_formulas(const Context& ctx, PropertyResult& r) {
  constexpr long double h = 1e-5L;
  r.details["fd_step"] = static_cast<double>(h);
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const Hyperplane plane{unit(rng, d), uniform(rng, -1.0, 1.0)};
    auto at_gap = [&](double gap) {
      Point p = gaussian(rng, d);
      return Point(p + (plane.gap(p) - gap) * plane.normal);
    };
    const Point x = at_gap(uniform(rng, 0.1, 2.0));
    const funk::Line line{at_gap(uniform(rng, 0.1, 2.0)), unit(rng, d)};
    double s = uniform(rng, -0.5, 0.5);
    if (plane.gap(line.at(s)) < 0.05) s = 0.0;
    const auto closed = funk::derivative_check(x, line, s, plane);
    auto f = [&](long double tt) {
      long double gx = plane.offset, gs = plane.offset;
      for (int i = 0; i < d; ++i) {
        gx -= static_cast<long double>(plane.normal(i)) * x(i);
        gs -= static_cast<long double>(plane.normal(i)) *
              (static_cast<long double>(line.origin(i)) + tt * line.direction(i));
      }
      return std::log(gx / gs);
    };
    const long double t0 = s;
    const double fd1 = static_cast<double>((f(t0 + h) - f(t0 - h)) / (2 * h));
    const double fd2 = static_cast<double>((f(t0 + h) - 2 * f(t0) + f(t0 - h)) / (h * h));
    const double v = std::max({std::abs(closed.d1 - fd1) / std::max(1.0, std::abs(closed.d1)),
                               std::abs(closed.d2 - fd2) / std::max(1.0, std::abs(closed.d2)),
                               -closed.d2});
    tally(r, v, [&] {
      return json{{"trial", t}, {"normal", vj(plane.normal)}, {"offset", plane.offset},
                  {"origin", vj(line.origin)}, {"direction", vj(line.direction)}, {"t", s},
                  {"d1", closed.d1}, {"d2", closed.d2}, {"fd1", fd1}, {"fd2", fd2}};
    });
  });
}

std::vector<double> chord_grid(const ConvexBody& body, const funk::Line& line, int n) {
  const double hi = 0.9 * euclid::radial_function(body, line.origin, line.direction);
  const double lo = -0.9 * euclid::radial_function(body, line.origin, -line.direction);
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));
  return grid;
}

double min_second_difference(const funk::ConvexityProfile& p) {
  double m = std::numeric_limits<double>::infinity();
  for (const double v : p.second_differences) m = std::min(m, v);
  return m;
}

void convexity_forward(const Context& ctx, PropertyResult& r) {
  r.details["bodies"] = "balls, ellipsoids";
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = t % 3 == 0 ? Body{ConvexBody::ball(Point::Zero(d), 1.0), {{"type", "ball"}}}
                                 : random_ellipsoid(rng, d);
    const Point x = interior_point(rng, inst.body);
    const funk::Line line{interior_point(rng, inst.body), unit(rng, d)};
    const auto grid = chord_grid(inst.body, line, 21);
    const auto profile = funk::convexity_profile(inst.body, x, line, grid);
    const double m = min_second_difference(profile);
    tally(r, -m, [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"origin", vj(line.origin)},
                  {"direction", vj(line.direction)}, {"min_second_difference", m}};
    });
  });
}

void convexity_reversed_witness(const Context& ctx, PropertyResult& r) {
  const auto disk = ConvexBody::ball(Point::Zero(2), 1.0);
  const int budget = ctx.count(0.1, 20);
  double best = std::numeric_limits<double>::infinity();
  json witness;
  for (int t = 0; t < budget; ++t) {
    Rng rng = ctx.rng(t);
    const Point x = interior_point(rng, disk, 0.5);
    const funk::Line line{interior_point(rng, disk, 0.5), unit(rng, 2)};
    const auto grid = chord_grid(disk, line, 21);
    const auto profile = funk::convexity_profile(disk, x, line, grid, true);
    const double m = min_second_difference(profile);
    ++r.checks;
    if (m < best) {
      best = m;
      witness = {{"x", vj(x)}, {"origin", vj(line.origin)}, {"direction", vj(line.direction)},
                 {"t_min", grid.front()}, {"t_max", grid.back()}, {"min_second_difference", m}};
    }
    if (best < -1e-6) break;
  }
  r.witness = witness;
  r.details["found"] = best < -r.tolerance;
  if (!(best < -r.tolerance)) r.failures = 1;
}

void busemann_disk(const Context& ctx, PropertyResult& r) {
  const auto disk = ConvexBody::ball(Point::Zero(2), 1.0);
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const Point p = interior_point(rng, disk);
    const Point x = interior_point(rng, disk);
    const Point y = interior_point(rng, disk);
    const Point mx = funk::hilbert_midpoint(disk, p, x);
    const Point my = funk::hilbert_midpoint(disk, p, y);
    const double lhs = 2.0 * funk::hilbert(disk, mx, my).value;
    const double rhs = funk::hilbert(disk, x, y).value;
    tally(r, lhs - rhs, [&] { return json{{"trial", t}, {"p", vj(p)}, {"x", vj(x)}, {"y", vj(y)}}; });
  });
}

void busemann_square_witness(const Context& ctx, PropertyResult& r) {
  const auto square = ConvexBody::box(Point::Constant(2, -1.0), Point::Constant(2, 1.0));
  const int budget = ctx.count(1.0, 200);
  double best = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < budget; ++t) {
    Rng rng = ctx.rng(t);
    const Point p = interior_point(rng, square, 0.95);
    const Point x = interior_point(rng, square, 0.95);
    const Point y = interior_point(rng, square, 0.95);
    const Point mx = funk::hilbert_midpoint(square, p, x);
    const Point my = funk::hilbert_midpoint(square, p, y);
    const double excess = 2.0 * funk::hilbert(square, mx, my).value - funk::hilbert(square, x, y).value;
    ++r.checks;
    if (excess > best) {
      best = excess;
      r.witness = {{"trial", t}, {"p", vj(p)}, {"x", vj(x)}, {"y", vj(y)}, {"excess", excess}};
    }
    if (best > 1e-3) break;
  }
  r.details["found"] = best > r.tolerance;
  r.details["best_excess"] = best;
  if (!(best > r.tolerance)) r.failures = 1;
}

void finsler_subadditivity(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = random_body(rng, d, kPolytope | kEllipsoid | kOracle);
    const Point x = interior_point(rng, inst.body);
    const Vector a = gaussian(rng, d), b = gaussian(rng, d);
    const double pa = funk::finsler_norm(inst.body, x, a);
    const double pb = funk::finsler_norm(inst.body, x, b);
    const double pab = funk::finsler_norm(inst.body, x, a + b);
    tally(r, (pab - pa - pb) / std::max(1.0, pa + pb), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"xi1", vj(a)}, {"xi2", vj(b)}};
    });
  });
}

void radial_identity(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = random_body(rng, d, kPolytope | kEllipsoid);
    const Point x = interior_point(rng, inst.body);
    const Vector u = unit(rng, d);
    const double radial = euclid::radial_function(inst.body, x, u);
    double v = 0.0;
    if (const auto* poly = inst.body.as_polytope()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& h : poly->halfspaces) {
        const double c = h.normal.dot(u);
        if (c > 0.0) best = std::min(best, h.gap(x) / c);
      }
      v = std::abs(best - radial);
    } else {
      const auto& e = *inst.body.as_ellipsoid();
      const auto hit = euclid::ray_exit(inst.body, x, u);
      const auto planes = euclid::supporting_hyperplanes_at(inst.body, hit->point);
      v = std::abs(euclid::distance_to_hyperplane(x, planes.front()) / planes.front().normal.dot(u) - radial);
      for (int i = 0; i < 32; ++i) {
        const Vector z = unit(rng, d);
        const Point b = e.center + e.axes * e.radii.cwiseProduct(z);
        const Hyperplane plane = Hyperplane::from_unnormalized(
            e.axes * z.cwiseQuotient(e.radii), 0.0);
        const double c = plane.normal.dot(u);
        if (c <= 0.0) continue;
        v = std::max(v, radial - plane.normal.dot(b - x) / c);
      }
    }
    tally(r, v / std::max(1.0, radial), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"xi", vj(u)}, {"radial", radial}};
    });
  });
}

void foot_minimality(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const Hyperplane plane{unit(rng, d), uniform(rng, -2.0, 2.0)};
    const Point x = 2.0 * gaussian(rng, d);
    const Point f = euclid::foot(x, plane);
    const double base = (x - f).norm();
    double v = std::abs(plane.gap(f));
    for (int i = 0; i < 100; ++i) {
      Vector w = gaussian(rng, d);
      w -= w.dot(plane.normal) * plane.normal;
      v = std::max(v, base - (x - (f + uniform(rng, 0.0, 1.0) * w)).norm());
    }
    tally(r, v, [&] {
      return json{{"trial", t}, {"normal", vj(plane.normal)}, {"offset", plane.offset}, {"x", vj(x)}};
    });
  });
}

void ray_exit_boundary(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = random_body(rng, d, kPolytope | kEllipsoid);
    const Point x = interior_point(rng, inst.body);
    const Vector u = unit(rng, d);
    const auto hit = euclid::ray_exit(inst.body, x, u);
    double v = std::abs(membership_residual(inst.body, hit->point));
    if (!euclid::contains_interior(inst.body, x + 0.99 * hit->t_exit * u)) v = 1.0;
    if (membership_residual(inst.body, x + 1.01 * hit->t_exit * u) >= 0.0) v = 1.0;
    tally(r, v, [&] { return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"xi", vj(u)}}; });
  });
}

void affine_equivariance(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = random_body(rng, d, kPolytope | kEllipsoid | kOracle);
    const Point x = interior_point(rng, inst.body);
    const Vector u = unit(rng, d);
    const auto f = random_affine(rng, d);
    const auto image = inst.body.transformed(f.a, f.b);
    const auto hit = euclid::ray_exit(inst.body, x, u);
    const auto moved = euclid::ray_exit(image, f.a * x + f.b, (f.a * u).normalized());
    const Point expected = f.a * hit->point + f.b;
    tally(r, (moved->point - expected).norm() / std::max(1.0, expected.norm()), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"map", affine_json(f)}, {"x", vj(x)}, {"xi", vj(u)}};
    });
  });
}

void affine_invariance(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const int d = pick_dim(rng, ctx.dims());
    const auto inst = random_body(rng, d, kPolytope | kEllipsoid | kOracle);
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    const auto f = random_affine(rng, d);
    const auto image = inst.body.transformed(f.a, f.b);
    const Point fx = f.a * x + f.b, fy = f.a * y + f.b;
    double v = std::abs(funk::funk_f1(image, fx, fy).value - funk::funk_f1(inst.body, x, y).value);
    v = std::max(v, std::abs(funk::hilbert(image, fx, fy).value - funk::hilbert(inst.body, x, y).value));
    if (inst.body.kind() == ConvexBody::Kind::Polytope) {
      v = std::max(v, std::abs(funk::funk_f2(image, fx, fy).value - funk::funk_f2(inst.body, x, y).value));
    }
    tally(r, v, [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"map", affine_json(f)}, {"x", vj(x)}, {"y", vj(y)}};
    });
  });
}

void cross_ratio_identity(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_body(rng, pick_dim(rng, ctx.dims()), kPolytope | kEllipsoid | kOracle);
    const Point x = interior_point(rng, inst.body);
    const Point y = interior_point(rng, inst.body);
    const double cr = funk::cross_ratio_log(inst.body, x, y);
    const double h = funk::hilbert(inst.body, x, y).value;
    const double sum = funk::funk_f1(inst.body, x, y).value + funk::funk_f1(inst.body, y, x).value;
    tally(r, std::max(std::abs(cr - 2.0 * h), std::abs(cr - sum)), [&] {
      return json{{"trial", t}, {"body", inst.desc}, {"x", vj(x)}, {"y", vj(y)}};
    });
  });
}

// ---------------------------------------------------------------------------
// Hyperbolic instances

constexpr double kDomainMargin = 0.01;

Isometry random_isometry(Rng& rng, double max_rapidity) {
  return Isometry::rotation(uniform(rng, 0.0, 2.0 * kPi)) *
         Isometry::boost(uniform(rng, -max_rapidity, max_rapidity)) *
         Isometry::rotation(uniform(rng, 0.0, 2.0 * kPi));
}

// Line at distance `r` from the origin, facing direction `angle`; the origin
// is on the kept side.
HGeodesicLine line_at(double r, double angle) {
  return HGeodesicLine::normalized(Vec3(std::cosh(r) * std::cos(angle), std::cosh(r) * std::sin(angle), std::sinh(r)));
}

struct Domain {
  hyp::GeodesicDomain domain;
  json desc;
};

json domain_json(const hyp::GeodesicDomain& d) {
  json list = json::array();
  for (const auto& b : d.boundaries) list.push_back({{"normal", vj(b.normal())}});
  return {{"boundaries_disk", list}, {"witness_disk", hj(d.witness)}};
}

Domain random_domain(Rng& rng) {
  const int k = uniform_int(rng, 2, 5);
  std::vector<HGeodesicLine> lines;
  for (int i = 0; i < k; ++i) lines.push_back(line_at(uniform(rng, 0.3, 2.0), uniform(rng, 0.0, 2.0 * kPi)));
  const auto g = random_isometry(rng, 1.0);
  auto d = g.apply(hyp::GeodesicDomain::make(std::move(lines), HPoint::origin()));
  auto desc = domain_json(d);
  return {std::move(d), std::move(desc)};
}

bool well_inside(const hyp::GeodesicDomain& d, const HPoint& p) {
  for (const auto& b : d.boundaries) {
    if (hyp::signed_dist_to_geodesic(p, b) > -kDomainMargin) return false;
  }
  return true;
}

HPoint domain_point(Rng& rng, const hyp::GeodesicDomain& d) {
  for (int i = 0; i < 200; ++i) {
    const auto p = hyp::exp_map(hyp::unit_tangent(d.witness, uniform(rng, 0.0, 2.0 * kPi)),
                                uniform(rng, 0.0, 2.5));
    if (well_inside(d, p)) return p;
  }
  return d.witness;
}

model::HPiecewisePath random_hpath(Rng& rng, const hyp::GeodesicDomain& d, const HPoint& x, const HPoint& y) {
  const double len = hyp::h_dist(x, y);
  const auto start = hyp::log_map(x, y).tangent;
  const int m = uniform_int(rng, 1, 4);
  std::vector<double> fractions;
  for (int i = 0; i < m; ++i) fractions.push_back(uniform(rng, 0.0, 1.0));
  std::sort(fractions.begin(), fractions.end());
  model::HPiecewisePath path{{x}};
  for (const double f : fractions) {
    const auto base = hyp::exp_map(start, f * len);
    const auto dir = hyp::unit_tangent(base, uniform(rng, 0.0, 2.0 * kPi));
    double reach = uniform(rng, 0.0, 0.5 * len + 0.2);
    auto knot = base;
    for (int i = 0; i < 8; ++i, reach *= 0.5) {
      const auto candidate = hyp::exp_map(dir, reach);
      if (well_inside(d, candidate)) {
        knot = candidate;
        break;
      }
    }
    if (hyp::h_dist(knot, path.knots.back()) > 1e-9) path.knots.push_back(knot);
  }
  if (hyp::h_dist(y, path.knots.back()) <= 1e-9) path.knots.pop_back();
  path.knots.push_back(y);
  return path;
}

json hpath_json(const model::HPiecewisePath& path) {
  json out = json::array();
  for (const auto& k : path.knots) out.push_back(hj(k));
  return out;
}

// ---------------------------------------------------------------------------
// Hyperbolic properties

// A point y such that the ray from x through y reaches a boundary.
HPoint point_on_hitting_ray(Rng& rng, const hyp::GeodesicDomain& domain, const HPoint& x) {
  std::optional<model::FirstHit> hit;
  HTangent xi;
  for (int attempt = 0; attempt < 64 && !hit; ++attempt) {
    xi = hyp::unit_tangent(x, uniform(rng, 0.0, 2.0 * kPi));
    hit = model::first_hit(domain, x, xi);
  }
  if (!hit) {
    const auto k = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(domain.boundaries.size()) - 1));
    xi = hyp::normal_field(x, domain.boundaries[k]);
    hit = model::first_hit(domain, x, xi);
  }
  return hyp::exp_map(xi, uniform(rng, 0.05, 0.95) * std::min(hit->hit.s, 5.0));
}

void chain_phi1_le_f2(const Context& ctx, PropertyResult& r) {
  // phi1 only bounds F2 along rays that reach a boundary.
  std::vector<double> gaps;
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    const auto y = point_on_hitting_ray(rng, inst.domain, x);
    const double f2 = model::wp_f2(inst.domain, x, y).raw;
    const double phi = model::phi1(inst.domain, x, y).value;
    gaps.push_back(f2 - phi);
    tally(r, phi - f2, [&] {
      return json{{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"y", hj(y)}, {"phi1", phi}, {"f2_raw", f2}};
    });
  });
  r.details["f2_minus_phi1"] = stats(gaps);
  r.details["strict_gaps"] = std::count_if(gaps.begin(), gaps.end(), [](double g) { return g > 1e-6; });
}

void chain_f2_le_length_tilde(const Context& ctx, PropertyResult& r) {
  constexpr int kPathsPerPair = 100;
  r.details["paths_per_pair"] = kPathsPerPair;
  std::vector<double> margins;
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    const auto y = domain_point(rng, inst.domain);
    if (hyp::h_dist(x, y) < 1e-9) return;
    const double f2 = model::wp_f2(inst.domain, x, y).raw;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kPathsPerPair; ++i) {
      const auto path = i == 0 ? model::geodesic_path(x, y, 0) : random_hpath(rng, inst.domain, x, y);
      const double len = model::length_tilde(inst.domain, path);
      margin = std::min(margin, len - f2);
      tally(r, f2 - len, [&] {
        return json{{"trial", t}, {"domain", inst.desc}, {"path", hpath_json(path)}, {"f2_raw", f2}, {"length_tilde", len}};
      });
    }
    margins.push_back(margin);
  });
  r.details["min_length_minus_f2"] = stats(margins);
}

void chain_f1est(const Context& ctx, PropertyResult& r) {
  model::EstimateOptions options;
  options.knot_count = 3;
  options.restarts = 1;
  r.details["knot_count"] = options.knot_count;
  r.details["restarts"] = options.restarts;
  std::vector<double> gaps;
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    const auto y = domain_point(rng, inst.domain);
    if (hyp::h_dist(x, y) < 1e-9) return;
    const double f1 = model::wp_f1_estimate(inst.domain, x, y, options).value;
    const double phi = model::phi1(inst.domain, x, y).value;
    double v = f1 - phi;
    if (model::first_hit(inst.domain, x, hyp::log_map(x, y).tangent)) {
      v = std::max(v, f1 - model::wp_f2(inst.domain, x, y).raw);
    }
    gaps.push_back(phi - f1);
    tally(r, v, [&] {
      return json{{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"y", hj(y)}, {"f1_estimate", f1}, {"phi1", phi}};
    });
  });
  r.details["phi1_minus_f1_estimate"] = stats(gaps);
}

void f3est_ge_f2(const Context& ctx, PropertyResult& r) {
  model::EstimateOptions options;
  options.restarts = 2;
  r.details["knot_count"] = options.knot_count;
  r.details["restarts"] = options.restarts;
  std::vector<double> gaps;
  for_trials(ctx, r, ctx.count(0.05, 2), [&](Rng& rng, int t) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    const auto y = domain_point(rng, inst.domain);
    if (hyp::h_dist(x, y) < 1e-9) return;
    const double f3 = model::wp_f3_estimate(inst.domain, x, y, options).value;
    const double f2 = model::wp_f2(inst.domain, x, y).raw;
    gaps.push_back(f3 - f2);
    tally(r, f2 - f3, [&] {
      return json{{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"y", hj(y)}, {"f3_estimate", f3}, {"f2_raw", f2}};
    });
  });
  r.details["f3_estimate_minus_f2"] = stats(gaps);
  r.details["strict_gaps"] = std::count_if(gaps.begin(), gaps.end(), [](double g) { return g > 1e-6; });
}

void perpendicular_collapse(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const double a = uniform(rng, 0.5, 3.0);
    const double b = uniform(rng, 0.1, a - 0.1);
    std::vector<HGeodesicLine> lines{HGeodesicLine(Vec3(-1.0, 0.0, 0.0))};
    const int extra = uniform_int(rng, 0, 3);
    for (int i = 0; i < extra; ++i) {
      lines.push_back(line_at(uniform(rng, 2.0 * a + 1.0, 2.0 * a + 3.0), uniform(rng, 0.0, 2.0 * kPi)));
    }
    const HPoint px(Vec3(std::sinh(a), 0.0, std::cosh(a)));
    const HPoint py(Vec3(std::sinh(b), 0.0, std::cosh(b)));
    const auto g = random_isometry(rng, 1.5);
    const auto d = g.apply(hyp::GeodesicDomain::make(lines, HPoint::polar(0.5 * (a + b), 0.0)));
    const auto x = g.apply(px), y = g.apply(py);
    const auto f2 = model::wp_f2(d, x, y);
    const double phi = model::phi1(d, x, y).value;
    double v = std::max(std::abs(phi - f2.value), std::abs(f2.value - std::log(a / b)));
    if (f2.attained_at != std::size_t{0}) v = 1.0;
    tally(r, v, [&] {
      return json{{"trial", t}, {"domain", domain_json(d)}, {"x", hj(x)}, {"y", hj(y)}, {"phi1", phi}, {"f2", f2.value}};
    });
  });
}

using ModelMetric = std::function<double(const hyp::GeodesicDomain&, const HPoint&, const HPoint&)>;

void model_triangle(const Context& ctx, PropertyResult& r, const ModelMetric& f) {
  for_trials(ctx, r, ctx.count(10.0), [&](Rng& rng, int t) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    const auto y = domain_point(rng, inst.domain);
    const auto z = domain_point(rng, inst.domain);
    const double xy = f(inst.domain, x, y), yz = f(inst.domain, y, z), xz = f(inst.domain, x, z);
    tally(r, xz - xy - yz, [&] {
      return json{{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"y", hj(y)}, {"z", hj(z)},
                  {"xy", xy}, {"yz", yz}, {"xz", xz}};
    });
  });
}

void triangle_wp_f2_raw(const Context& ctx, PropertyResult& r) {
  model_triangle(ctx, r, [](const auto& d, const auto& x, const auto& y) { return model::wp_f2(d, x, y).raw; });
}

void triangle_wp_f2(const Context& ctx, PropertyResult& r) {
  model_triangle(ctx, r, [](const auto& d, const auto& x, const auto& y) { return model::wp_f2(d, x, y).value; });
}

void triangle_wp_hilbert(const Context& ctx, PropertyResult& r) {
  model_triangle(ctx, r,
                 [](const auto& d, const auto& x, const auto& y) { return model::wp_hilbert(d, x, y).value; });
}

void isometry_invariance(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    const auto y = domain_point(rng, inst.domain);
    if (hyp::h_dist(x, y) < 1e-9) return;
    const auto g = random_isometry(rng, 1.5);
    const auto d2 = g.apply(inst.domain);
    const auto x2 = g.apply(x), y2 = g.apply(y);
    const auto xi = hyp::log_map(x, y).tangent;
    const auto xi2 = g.apply(xi);
    double v = std::abs(hyp::h_dist(x, y) - hyp::h_dist(x2, y2));
    v = std::max(v, std::abs(model::wp_f2(inst.domain, x, y).raw - model::wp_f2(d2, x2, y2).raw));
    v = std::max(v, std::abs(model::phi1(inst.domain, x, y).value - model::phi1(d2, x2, y2).value));
    v = std::max(v, std::abs(model::wp_hilbert(inst.domain, x, y).value - model::wp_hilbert(d2, x2, y2).value));
    v = std::max(v, std::abs(model::p_tilde(inst.domain, xi) - model::p_tilde(d2, xi2)));
    v = std::max(v, std::abs(model::p_hat(inst.domain, xi) - model::p_hat(d2, xi2)));
    for (std::size_t i = 0; i < inst.domain.boundaries.size(); ++i) {
      const auto& b = inst.domain.boundaries[i];
      const auto& b2 = d2.boundaries[i];
      v = std::max(v, std::abs(hyp::signed_dist_to_geodesic(x, b) - hyp::signed_dist_to_geodesic(x2, b2)));
      const auto h = hyp::ray_hit_geodesic(x, xi, b);
      const auto h2 = hyp::ray_hit_geodesic(x2, xi2, b2);
      if (h.has_value() != h2.has_value()) {
        v = 1.0;
      } else if (h) {
        v = std::max(v, std::abs(h->s - h2->s));
        v = std::max(v, hyp::h_dist(g.apply(h->point), h2->point));
      }
    }
    tally(r, v, [&] { return json{{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"y", hj(y)}}; });
  });
}

void distance_convexity(const Context& ctx, PropertyResult& r) {
  constexpr double h = 0.05;
  std::int64_t strict_failures = 0;
  std::vector<double> minima;
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const double dist = uniform(rng, 0.3, 2.0);
    const double theta = uniform(rng, 0.3, kPi - 0.3);
    // Standard frame: the line p1 = 0 with the point on the p1 > 0 side.
    const auto g = random_isometry(rng, 1.5);
    const HGeodesicLine line = g.apply(HGeodesicLine(Vec3(-1.0, 0.0, 0.0)));
    const Vec3 nu(-std::cosh(dist), 0.0, -std::sinh(dist));
    const HTangent start = g.apply(HTangent{HPoint::polar(dist, 0.0),
                                            std::cos(theta) * nu + std::sin(theta) * Vec3(0.0, 1.0, 0.0)});
    // sinh of the distance along the geodesic, in closed form.
    auto sinh_dist = [&](double s) {
      return std::sinh(dist) * std::cosh(s) - std::cos(theta) * std::cosh(dist) * std::sinh(s);
    };
    double lo = 0.0, hi = 0.0;
    while (lo > -1.0 && sinh_dist(lo - h) >= 0.05) lo -= h;
    while (hi < 1.0 && sinh_dist(hi + h) >= 0.05) hi += h;
    std::vector<double> f;
    for (double s = lo; s <= hi + 1e-12; s += h) {
      f.push_back(std::abs(hyp::signed_dist_to_geodesic(hyp::exp_map(start, s), line)));
    }
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) m = std::min(m, f[i - 1] - 2.0 * f[i] + f[i + 1]);
    if (!std::isfinite(m)) return;
    minima.push_back(m);
    if (m <= 1e-6) ++strict_failures;
    tally(r, m <= 1e-6 ? std::max(-m, 2.0 * r.tolerance) : -m, [&] {
      return json{{"trial", t}, {"distance", dist}, {"angle", theta}, {"min_second_difference", m}};
    });
  });
  r.details["step"] = h;
  r.details["strict_threshold"] = 1e-6;
  r.details["strict_failures"] = strict_failures;
  r.details["min_second_difference"] = stats(minima);
}

void angle_monotonicity(const Context& ctx, PropertyResult& r) {
  for_trials(ctx, r, ctx.count(1.0), [&](Rng& rng, int t) {
    const auto g = random_isometry(rng, 1.0);
    const HGeodesicLine line = g.apply(line_at(uniform(rng, 0.3, 2.0), uniform(rng, 0.0, 2.0 * kPi)));
    const HTangent start = hyp::unit_tangent(g.apply(HPoint::origin()), uniform(rng, 0.0, 2.0 * kPi));
    double prev = std::numeric_limits<double>::infinity();
    double v = 0.0;
    for (int i = -40; i <= 40; ++i) {
      const double s = 0.05 * i;
      const HPoint p = hyp::exp_map(start, s);
      if (std::abs(hyp::minkowski(p.coords(), line.normal())) < 1e-9) continue;
      const double c = hyp::minkowski(hyp::normal_field(p, line).vec, hyp::geodesic_velocity(start, s));
      v = std::max(v, c - prev);
      prev = c;
    }
    tally(r, v, [&] { return json{{"trial", t}, {"normal", vj(line.normal())}, {"start", hj(start.base)}}; });
  });
}

// Angles, in the unit_tangent frame at p, of the directions toward the two
// ideal endpoints of a line.
std::pair<double, double> visual_angles(const HPoint& p, const HGeodesicLine& line) {
  const auto [a, b] = line.ideal_endpoints();
  const auto e1 = hyp::unit_tangent(p, 0.0).vec, e2 = hyp::unit_tangent(p, 0.5 * kPi).vec;
  auto angle = [&](const Eigen::Vector2d& e) {
    const Vec3 w(e.x(), e.y(), 1.0);
    const Vec3 tangent = w + hyp::minkowski(w, p.coords()) * p.coords();
    return std::atan2(hyp::minkowski(tangent, e2), hyp::minkowski(tangent, e1));
  };
  return {angle(a), angle(b)};
}

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

void p_hat_nonconvexity_witness(const Context& ctx, PropertyResult& r) {
  constexpr double kOffset = 0.02;
  double best = -std::numeric_limits<double>::infinity();
  const int budget = ctx.count(0.1, 10);
  for (int t = 0; t < budget && best <= 1e-3; ++t) {
    Rng rng = ctx.rng(t);
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    for (const auto& line : inst.domain.boundaries) {
      const auto [ta, tb] = visual_angles(x, line);
      const double sign = wrap(tb - ta) > 0.0 ? 1.0 : -1.0;
      const auto u1 = hyp::unit_tangent(x, ta - sign * kOffset);
      const auto u2 = hyp::unit_tangent(x, tb + sign * kOffset);
      const HTangent sum{x, u1.vec + u2.vec};
      const double excess = model::p_hat(inst.domain, sum) - model::p_hat(inst.domain, u1) -
                            model::p_hat(inst.domain, u2);
      ++r.checks;
      if (excess > best) {
        best = excess;
        r.witness = {{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"angle1", ta - sign * kOffset},
                     {"angle2", tb + sign * kOffset}, {"excess", excess}};
      }
    }
  }
  r.details["best_excess"] = best;
  r.details["found"] = best > r.tolerance;
  if (!(best > r.tolerance)) r.failures = 1;
}

void p_hat_discontinuity_search(const Context& ctx, PropertyResult& r) {
  // p_hat decays like 2 / log(1 / step) near a visual endpoint, so the jump
  // is reported at several approach steps.
  constexpr std::array<int, 3> kSteps = {10, 20, 30};
  std::array<double, kSteps.size()> max_jump{};
  bool found = false;
  for_trials(ctx, r, ctx.count(0.1, 10), [&](Rng& rng, int t) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    for (const auto& line : inst.domain.boundaries) {
      const auto [ta, tb] = visual_angles(x, line);
      for (const double base : {ta, tb}) {
        const double at = model::p_hat(inst.domain, hyp::unit_tangent(x, base));
        for (const double side : {-1.0, 1.0}) {
          for (std::size_t k = 0; k < kSteps.size(); ++k) {
            const double step = std::ldexp(1.0, -kSteps[k]);
            const double near = model::p_hat(inst.domain, hyp::unit_tangent(x, base + side * step));
            ++r.checks;
            const double jump = std::abs(at - near);
            if (jump > max_jump[k]) {
              max_jump[k] = jump;
              if (k + 1 == kSteps.size()) {
                r.details["largest_jump"] = {{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"angle", base},
                                             {"side", side}, {"p_hat", at}, {"p_hat_nearby", near}};
              }
            }
            if (!found && k + 1 == kSteps.size() && at > 0.1 && near < 1e-3) {
              found = true;
              r.witness = {{"trial", t}, {"domain", inst.desc}, {"x", hj(x)}, {"angle", base},
                           {"p_hat", at}, {"p_hat_nearby", near}};
            }
          }
        }
      }
    }
  });
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t k = 0; k < kSteps.size(); ++k) {
    steps.push_back({{"step", std::ldexp(1.0, -kSteps[k])}, {"max_jump", max_jump[k]}});
  }
  r.details["jumps"] = steps;
  r.details["found"] = found;
}

void wp_f2_convexity_observation(const Context& ctx, PropertyResult& r) {
  std::vector<double> minima;
  std::int64_t negative = 0;
  for_trials(ctx, r, ctx.count(0.1, 10), [&](Rng& rng, int) {
    const auto inst = random_domain(rng);
    const auto x = domain_point(rng, inst.domain);
    const auto y = domain_point(rng, inst.domain);
    const auto z = domain_point(rng, inst.domain);
    if (hyp::h_dist(y, z) < 1e-6) return;
    const auto dir = hyp::log_map(y, z);
    std::vector<double> f;
    for (int i = 0; i <= 20; ++i) {
      f.push_back(model::wp_f2(inst.domain, x, hyp::exp_map(dir.tangent, dir.length * i / 20.0)).raw);
    }
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) m = std::min(m, f[i - 1] - 2.0 * f[i] + f[i + 1]);
    ++r.checks;
    minima.push_back(m);
    if (m < -1e-9) ++negative;
  });
  r.details["min_second_difference"] = stats(minima);
  r.details["lines_with_negative_second_difference"] = negative;
}

// ---------------------------------------------------------------------------

struct Entry {
  std::string_view name;
  std::string_view group;
  bool asserted;
  double tolerance;
  void (*run)(const Context&, PropertyResult&);
};

constexpr Entry kRegistry[] = {
    {"klein_identity", "euclid", true, 1e-10, klein_identity},
    {"forms_agree_polytope", "euclid", true, 1e-9, forms_agree_polytope},
    {"forms_agree_ellipsoid", "euclid", true, 1e-6, forms_agree_ellipsoid},
    {"forms_agree_oracle", "euclid", true, 1e-6, forms_agree_oracle},
    {"three_representations", "euclid", true, 1e-6, three_representations},
    {"straight_path_length", "euclid", true, 1e-8, straight_path_length},
    {"path_lower_bound", "euclid", true, 1e-7, path_lower_bound},
    {"triangle_f1", "euclid", true, 1e-9, triangle_f1},
    {"triangle_f2", "euclid", true, 1e-9, triangle_f2},
    {"triangle_hilbert", "euclid", true, 1e-9, triangle_hilbert},
    {"weak_axioms", "euclid", true, 1e-12, weak_axioms},
    {"square_additivity", "euclid", true, 1e-12, square_additivity},
    {"projectivity", "euclid", true, 1e-10, projectivity},
    {"derivative_formulas", "euclid", true, 1e-6, derivative_formulas},
    {"convexity_forward", "euclid", true, 1e-9, convexity_forward},
    {"convexity_reversed_witness", "euclid", true, 1e-9, convexity_reversed_witness},
    {"busemann_disk", "euclid", true, 1e-9, busemann_disk},
    {"busemann_square_witness", "euclid", true, 1e-6, busemann_square_witness},
    {"finsler_subadditivity", "euclid", true, 1e-10, finsler_subadditivity},
    {"radial_identity", "euclid", true, 1e-10, radial_identity},
    {"foot_minimality", "euclid", true, 1e-12, foot_minimality},
    {"ray_exit_boundary", "euclid", true, 1e-10, ray_exit_boundary},
    {"affine_equivariance", "euclid", true, 1e-9, affine_equivariance},
    {"affine_invariance", "euclid", true, 1e-9, affine_invariance},
    {"cross_ratio_identity", "euclid", true, 1e-10, cross_ratio_identity},
    {"chain_phi1_le_f2", "hyperbolic", true, 1e-9, chain_phi1_le_f2},
    {"chain_f2_le_length_tilde", "hyperbolic", true, 1e-8, chain_f2_le_length_tilde},
    {"chain_f1est", "hyperbolic", true, 1e-8, chain_f1est},
    {"f3est_ge_f2", "hyperbolic", true, 1e-7, f3est_ge_f2},
    {"perpendicular_collapse", "hyperbolic", true, 1e-10, perpendicular_collapse},
    {"triangle_wp_f2_raw", "hyperbolic", true, 1e-9, triangle_wp_f2_raw},
    {"triangle_wp_f2", "hyperbolic", true, 1e-9, triangle_wp_f2},
    {"triangle_wp_hilbert", "hyperbolic", true, 1e-9, triangle_wp_hilbert},
    {"isometry_invariance", "hyperbolic", true, 1e-9, isometry_invariance},
    {"distance_convexity", "hyperbolic", true, 1e-9, distance_convexity},
    {"angle_monotonicity", "hyperbolic", true, 1e-9, angle_monotonicity},
    {"p_hat_nonconvexity_witness", "hyperbolic", true, 1e-6, p_hat_nonconvexity_witness},
    {"p_hat_discontinuity_search", "hyperbolic", false, 0.1, p_hat_discontinuity_search},
    {"wp_f2_convexity_observation", "hyperbolic", false, 0.0, wp_f2_convexity_observation},
};

bool in_suite(const Entry& e, std::string_view suite) { return suite == "all" || e.group == suite; }

void validate(const SuiteOptions& options) {
  if (options.suite != "euclid" && options.suite != "hyperbolic" && options.suite != "all") {
    throw Error(ErrorCode::InvalidArgument, "unknown suite \"" + options.suite + "\"");
  }
  if (options.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (options.dims.empty()) throw Error(ErrorCode::InvalidArgument, "dims must not be empty");
  for (const int d : options.dims) {
    if (d != 2 && d != 3) throw Error(ErrorCode::InvalidArgument, "dims must be 2 or 3");
  }
}

}  // namespace

json PropertyResult::to_json(bool include_timing) const {
  json out = {{"name", name},     {"group", group},         {"asserted", asserted},
          {"passed", passed()}, {"checks", checks},     {"failures", failures},
          {"worst", worst},   {"tolerance", tolerance}, {"details", details},
          {"witness", witness}};
  if (include_timing) out["wall_seconds"] = wall_seconds;
  return out;
}

bool SuiteReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed(); });
}

const PropertyResult* SuiteReport::find(std::string_view name) const {
  for (const auto& p : properties) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

json SuiteReport::to_json(bool include_timing) const {
  json props = json::array();
  json failed = json::array();
  for (const auto& p : properties) {
    props.push_back(p.to_json(include_timing));
    if (!p.passed()) failed.push_back(p.name);
  }
  json out = {{"suite", suite}, {"trials", trials}, {"seed", seed},     {"dims", dims},
              {"passed", passed()}, {"failed", failed}, {"properties", props}};
  if (include_timing) out["wall_seconds"] = wall_seconds;
  return out;
}

std::vector<std::string> property_names(std::string_view suite) {
  std::vector<std::string> out;
  for (const auto& e : kRegistry) {
    if (in_suite(e, suite)) out.emplace_back(e.name);
  }
  return out;
}

PropertyResult run_property(std::string_view name, const SuiteOptions& options) {
  validate(options);
  for (const auto& e : kRegistry) {
    if (e.name != name) continue;
    PropertyResult r;
    r.name = e.name;
    r.group = e.group;
    r.asserted = e.asserted;
    r.tolerance = e.tolerance;
    const auto start = std::chrono::steady_clock::now();
    e.run(Context(options, e.name), r);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown property \"" + std::string(name) + "\"");
}

SuiteReport run_suite(const SuiteOptions& options) {
  validate(options);
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report{options.suite, options.trials, options.seed, options.dims, {}, 0.0};
  for (const auto& e : kRegistry) {
    if (in_suite(e, options.suite)) report.properties.push_back(run_property(e.name, options));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace funkspace::verify
