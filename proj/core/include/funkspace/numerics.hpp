#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace funkspace::numerics {

// Result of maximizing c.q subject to A q <= g, with g >= 0 so that q = 0 is a
// feasible starting vertex. Used for support queries and Chebyshev centers.
struct LinearProgramResult {
  enum class Status { Optimal, Unbounded } status = Status::Optimal;
  Eigen::VectorXd argmax;
  double value = 0.0;
};

LinearProgramResult maximize_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                                    const Eigen::VectorXd& c);

// Center and radius of the largest ball inside {p : A p <= b}, with the rows
// of A normalized by the caller. The radius is capped at `radius_cap`;
// std::nullopt when the set has no interior (radius <= 0).
struct ChebyshevBall {
  Eigen::VectorXd center;
  double radius = 0.0;
};
std::optional<ChebyshevBall> chebyshev_center(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                              double radius_cap);

// Adaptive Gauss-Legendre quadrature. Each interval is split in two until the
// 10-point rule on the halves agrees with the rule on the whole to the local
// tolerance. The local tolerance shrinks by sqrt(2) per level so that isolated
// jump discontinuities still converge.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth = 64);

struct SphereAscentResult {
  Eigen::VectorXd u;
  double value = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Objective on the unit sphere: returns the value and writes the Euclidean
// gradient (the tangential part is taken internally).
using SphereObjective = std::function<double(const Eigen::VectorXd& u, Eigen::VectorXd& grad)>;

// Projected gradient ascent with Barzilai-Borwein steps and an Armijo
// safeguard, retracting onto the sphere after every step.
SphereAscentResult ascend_on_sphere(const SphereObjective& objective, Eigen::VectorXd start,
                                    double grad_tol = 1e-10, int max_iter = 2000);

}  // namespace funkspace::numerics
