#include "test_support.hpp"

#include "funkspace/verify.hpp"

namespace {

using namespace funkspace;
using namespace funkspace::verify;

TEST(Verify, PropertyNames) {
  const auto euclid = property_names("euclid");
  const auto hyper = property_names("hyperbolic");
  const auto all = property_names("all");
  EXPECT_FALSE(euclid.empty());
  EXPECT_FALSE(hyper.empty());
  EXPECT_EQ(all.size(), euclid.size() + hyper.size());
  EXPECT_EQ(euclid.front(), "klein_identity");
}

TEST(Verify, InvalidOptions) {
  SuiteOptions o;
  o.suite = "spherical";
  EXPECT_ERROR_CODE(run_suite(o), ErrorCode::InvalidArgument);
  o.suite = "euclid";
  o.trials = 0;
  EXPECT_ERROR_CODE(run_suite(o), ErrorCode::InvalidArgument);
  o.trials = 1;
  o.dims = {4};
  EXPECT_ERROR_CODE(run_suite(o), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(run_property("no_such_property", SuiteOptions{}), ErrorCode::InvalidArgument);
}

TEST(Verify, SingleProperty) {
  SuiteOptions o;
  o.trials = 20;
  const auto r = run_property("forms_agree_polytope", o);
  EXPECT_EQ(r.group, "euclid");
  EXPECT_EQ(r.checks, 20);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.worst, r.tolerance);
}

TEST(Verify, EuclidReportIsByteIdentical) {
  SuiteOptions o;
  o.suite = "euclid";
  o.trials = 1;
  o.seed = 7;
  const auto a = run_suite(o).to_json().dump(2);
  const auto b = run_suite(o).to_json().dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("wall_seconds"), std::string::npos);
}

TEST(Verify, SeedChangesDraws) {
  SuiteOptions a, b;
  a.trials = b.trials = 5;
  b.seed = a.seed + 1;
  EXPECT_NE(run_property("triangle_f1", a).to_json().dump(), run_property("triangle_f1", b).to_json().dump());
}

TEST(Verify, DimsRestrictEuclideanDraws) {
  SuiteOptions o;
  o.trials = 10;
  o.dims = {2};
  EXPECT_TRUE(run_property("forms_agree_ellipsoid", o).passed());
}

TEST(Verify, HyperbolicSmoke) {
  SuiteOptions o;
  o.suite = "hyperbolic";
  o.trials = 3;
  const auto r = run_suite(o);
  EXPECT_TRUE(r.passed());
  ASSERT_NE(r.find("perpendicular_collapse"), nullptr);
  EXPECT_EQ(r.find("missing"), nullptr);
}

}  // namespace
