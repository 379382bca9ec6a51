#include "funkspace/numerics.hpp"

#include "funkspace/error.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace funkspace::numerics {

LinearProgramResult maximize_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                                    const Eigen::VectorXd& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index d = A.cols();
  if (g.size() != m || c.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "linear program shape");
  }
  // Columns: q+ (d), q- (d), slacks (m), rhs. Row m holds the reduced costs.
  const Eigen::Index n = 2 * d + m;
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, n + 1);
  tab.block(0, 0, m, d) = A;
  tab.block(0, d, m, d) = -A;
  tab.block(0, 2 * d, m, m) = Eigen::MatrixXd::Identity(m, m);
  tab.block(0, n, m, 1) = g;
  tab.block(m, 0, 1, d) = -c.transpose();
  tab.block(m, d, 1, d) = c.transpose();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = 2 * d + i;

  constexpr double eps = 1e-12;
  LinearProgramResult result;
  for (int iter = 0; iter < 10000; ++iter) {
    // Bland's rule: lowest-index improving column, lowest-index tied row.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (tab(m, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab(i, enter) > eps) {
        const double ratio = tab(i, n) / tab(i, enter);
        if (ratio < best - eps ||
            (ratio < best + eps && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      result.status = LinearProgramResult::Status::Unbounded;
      return result;
    }
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i != leave && tab(i, enter) != 0.0) tab.row(i) -= tab(i, enter) * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) x(basis[static_cast<std::size_t>(i)]) = tab(i, n);
  result.argmax = x.head(d) - x.segment(d, d);
  result.value = c.dot(result.argmax);
  return result;
}

std::optional<ChebyshevBall> chebyshev_center(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                              double radius_cap) {
  const Eigen::Index m = A.rows();
  const Eigen::Index d = A.cols();
  // Variables (p, s') with s = s0 + s'; the shift makes p = 0, s' = 0 feasible.
  const double s0 = std::min(b.minCoeff() - 1.0, 0.0);
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(m + 1, d + 1);
  lhs.block(0, 0, m, d) = A;
  lhs.block(0, d, m, 1) = Eigen::VectorXd::Ones(m);
  lhs(m, d) = 1.0;
  Eigen::VectorXd rhs(m + 1);
  rhs.head(m) = b - Eigen::VectorXd::Constant(m, s0);
  rhs(m) = radius_cap - s0;
  Eigen::VectorXd objective = Eigen::VectorXd::Zero(d + 1);
  objective(d) = 1.0;
  const auto lp = maximize_linear(lhs, rhs, objective);
  if (lp.status != LinearProgramResult::Status::Optimal) return std::nullopt;
  const double radius = s0 + lp.argmax(d);
  if (!(radius > 0.0)) return std::nullopt;
  return ChebyshevBall{lp.argmax.head(d), radius};
}

namespace {

struct GaussLegendre10 {
  std::array<double, 10> nodes{};
  std::array<double, 10> weights{};

  GaussLegendre10() {
    constexpr int n = 10;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  double apply(const std::function<double(double)>& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

const GaussLegendre10& rule() {
  static const GaussLegendre10 gl;
  return gl;
}

double refine(const std::function<double(double)>& f, double a, double b, double whole, double tol,
              int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = rule().apply(f, a, mid);
  const double right = rule().apply(f, mid, b);
  const double both = left + right;
  if (!std::isfinite(both)) throw Error(ErrorCode::NumericFailure, "non-finite integrand");
  if (std::abs(both - whole) <= tol) return both;
  if (depth >= max_depth) {
    throw Error(ErrorCode::NumericFailure, "quadrature not converged at max refinement");
  }
  const double child_tol = tol / M_SQRT2;
  return refine(f, a, mid, left, child_tol, depth + 1, max_depth) +
         refine(f, mid, b, right, child_tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
  if (a == b) return 0.0;
  const double whole = rule().apply(f, a, b);
  return refine(f, a, b, whole, abs_tol, 0, max_depth);
}

SphereAscentResult ascend_on_sphere(const SphereObjective& objective, Eigen::VectorXd start,
                                    double grad_tol, int max_iter) {
  SphereAscentResult res;
  res.u = start.normalized();
  Eigen::VectorXd grad(res.u.size());
  res.value = objective(res.u, grad);
  Eigen::VectorXd tangent = grad - grad.dot(res.u) * res.u;
  res.grad_norm = tangent.norm();
  double step = 1.0;
  Eigen::VectorXd prev_u, prev_tangent;

  for (int iter = 0; iter < max_iter; ++iter) {
    if (!std::isfinite(res.value)) break;
    if (res.grad_norm <= grad_tol) {
      res.converged = true;
      return res;
    }
    if (prev_u.size() == res.u.size()) {
      const Eigen::VectorXd s = res.u - prev_u;
      const Eigen::VectorXd y = prev_tangent - tangent;
      const double sy = s.dot(y);
      if (sy > 0.0) step = s.dot(s) / sy;
    }
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Eigen::VectorXd cand = (res.u + step * tangent).normalized();
      Eigen::VectorXd cand_grad(res.u.size());
      const double cand_value = objective(cand, cand_grad);
      if (std::isfinite(cand_value) &&
          cand_value >= res.value + 1e-4 * step * res.grad_norm * res.grad_norm) {
        prev_u = res.u;
        prev_tangent = tangent;
        res.u = cand;
        res.value = cand_value;
        tangent = cand_grad - cand_grad.dot(cand) * cand;
        res.grad_norm = tangent.norm();
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No ascent step exists at working precision; the point is stationary
      // up to rounding.
      res.converged = res.grad_norm <= std::max(grad_tol, 1e-7);
      return res;
    }
  }
  res.converged = res.grad_norm <= grad_tol;
  return res;
}

}  // namespace funkspace::numerics
