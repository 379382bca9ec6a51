#pragma once

#include "funkspace/convex_body.hpp"
#include "funkspace/error.hpp"
#include "funkspace/hyperbolic.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace funkspace::testing {

inline Eigen::VectorXd v2(double a, double b) { return Eigen::Vector2d(a, b); }
inline Eigen::VectorXd v3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }

inline euclid::ConvexBody square() { return euclid::ConvexBody::box(v2(-1, -1), v2(1, 1)); }
inline euclid::ConvexBody disk() { return euclid::ConvexBody::ball(v2(0, 0), 1.0); }
inline euclid::ConvexBody half_plane() {
  return euclid::ConvexBody::polytope({euclid::Hyperplane{v2(1, 0), 1.0}}, v2(0, 0));
}

/// (sinh s, 0, cosh s): the point at distance s along the p1 axis.
inline hyp::HPoint on_axis(double s) { return hyp::HPoint(hyp::Vec3(std::sinh(s), 0.0, std::cosh(s))); }

}  // namespace funkspace::testing

#define EXPECT_ERROR_CODE(stmt, expected)                                   \
  do {                                                                      \
    try {                                                                   \
      (void)(stmt);                                                         \
      ADD_FAILURE() << "expected " << ::funkspace::to_string(expected);     \
    } catch (const ::funkspace::Error& e) {                                 \
      EXPECT_EQ(e.code(), expected) << e.what();                            \
    }                                                                       \
  } while (0)
