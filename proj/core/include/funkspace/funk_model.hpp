#pragma once

#include "funkspace/hyperbolic.hpp"

#include <optional>
#include <string_view>
#include <vector>

// Funk-type metrics on a convex domain of the hyperbolic plane bounded by
// finitely many complete geodesics.
namespace funkspace::model {

using hyp::GeodesicDomain;
using hyp::HPoint;
using hyp::HTangent;

enum class Formulation { F2Raw, F2, Phi1, F1Est, F3Est, Hilbert };

std::string_view to_string(Formulation f);

struct ModelFunkValue {
  double value = 0.0;
  double raw = 0.0;
  Formulation formulation = Formulation::F2;
  /// Boundary index realizing the value, when there is one.
  std::optional<std::size_t> attained_at;
  /// Set when the raw value is negative.
  bool nonneg_violated = false;
};

/// Piecewise-geodesic path through the knots.
struct HPiecewisePath {
  std::vector<HPoint> knots;
};

struct EstimateOptions {
  int knot_count = 5;
  int restarts = 8;
  double tolerance = 1e-9;
  unsigned seed = 0xe57u;
  double perturbation = 0.15;
  double segment_tol = 1e-8;
};

/// First boundary crossed by the ray exp_x(s xi), s > 0; ties within 1e-12 go
/// to the lower index.
struct FirstHit {
  std::size_t boundary = 0;
  hyp::RayHit hit;
};
std::optional<FirstHit> first_hit(const GeodesicDomain& domain, const HPoint& x, const HTangent& xi);

/// max over boundaries of log(d(x, sigma) / d(y, sigma)); raw and clamped.
ModelFunkValue wp_f2(const GeodesicDomain& domain, const HPoint& x, const HPoint& y);

/// log(d(x, T) / d(y, T)) with T the first boundary hit of the ray from x
/// through y; 0 when the ray hits nothing.
ModelFunkValue phi1(const GeodesicDomain& domain, const HPoint& x, const HPoint& y);

/// max over boundaries of <nu_sigma(x), xi> / d(x, sigma). May be negative.
double p_tilde(const GeodesicDomain& domain, const HTangent& xi);

/// |xi| / (first hit parameter of the ray along xi), or 0 without a hit.
double p_hat(const GeodesicDomain& domain, const HTangent& xi);

double length_tilde(const GeodesicDomain& domain, const HPiecewisePath& path,
                    double segment_tol = 1e-8);
double length_hat(const GeodesicDomain& domain, const HPiecewisePath& path,
                  double segment_tol = 1e-8);

/// Geodesic segment from x to y subdivided by `knot_count` interior knots.
HPiecewisePath geodesic_path(const HPoint& x, const HPoint& y, int knot_count);

/// Upper estimates of inf over paths of length_tilde (F3) and length_hat (F1)
/// from a k-knot path family.
ModelFunkValue wp_f3_estimate(const GeodesicDomain& domain, const HPoint& x, const HPoint& y,
                              const EstimateOptions& options = {});
ModelFunkValue wp_f1_estimate(const GeodesicDomain& domain, const HPoint& x, const HPoint& y,
                              const EstimateOptions& options = {});

/// (F2raw(x, y) + F2raw(y, x)) / 2.
ModelFunkValue wp_hilbert(const GeodesicDomain& domain, const HPoint& x, const HPoint& y);

}  // namespace funkspace::model
