#include "funkspace/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace funkspace::numerics;

TEST(Integrate, Polynomial) {
  EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-14), 1.0 / 3.0, 1e-14);
}

TEST(Integrate, NearSingularIntegrand) {
  // Integral of 1/(1 - t) on [0, 0.999] is log(1000).
  EXPECT_NEAR(integrate([](double t) { return 1.0 / (1.0 - t); }, 0.0, 0.999, 1e-12), std::log(1000.0), 1e-10);
}

TEST(Integrate, JumpDiscontinuity) {
  EXPECT_NEAR(integrate([](double t) { return t < 0.3 ? 1.0 : 2.0; }, 0.0, 1.0, 1e-10), 1.7, 1e-9);
}

TEST(LinearProgram, SquareCorner) {
  Eigen::MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  const Eigen::VectorXd g = Eigen::VectorXd::Ones(4);
  const auto r = maximize_linear(A, g, Eigen::Vector2d(1, 2));
  ASSERT_EQ(r.status, LinearProgramResult::Status::Optimal);
  EXPECT_NEAR(r.value, 3.0, 1e-14);
  EXPECT_LT((r.argmax - Eigen::Vector2d(1, 1)).norm(), 1e-14);
}

TEST(LinearProgram, Unbounded) {
  Eigen::MatrixXd A(1, 2);
  A << 1, 0;
  const auto r = maximize_linear(A, Eigen::VectorXd::Ones(1), Eigen::Vector2d(0, 1));
  EXPECT_EQ(r.status, LinearProgramResult::Status::Unbounded);
}

TEST(Chebyshev, Rectangle) {
  Eigen::MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  Eigen::VectorXd b(4);
  b << 3, 1, 1, 1;
  const auto c = chebyshev_center(A, b, 100.0);
  ASSERT_TRUE(c);
  EXPECT_NEAR(c->radius, 1.0, 1e-14);
  EXPECT_NEAR(c->center(1), 0.0, 1e-14);
  b << -1, -1, 1, 1;
  EXPECT_FALSE(chebyshev_center(A, b, 100.0));
}

TEST(SphereAscent, LinearObjective) {
  const Eigen::Vector3d a(1, -2, 2);
  const auto r = ascend_on_sphere(
      [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
        grad = a;
        return a.dot(u);
      },
      Eigen::Vector3d(1, 0, 0));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 3.0, 1e-12);
  EXPECT_LT((r.u - a / 3.0).norm(), 1e-6);
}

}  // namespace
