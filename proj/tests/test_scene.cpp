#include "test_support.hpp"

#include "funkspace/scene.hpp"

namespace {

using namespace funkspace;
using namespace funkspace::io;

const char* kSquare = R"({"space":"euclidean","body":{"type":"halfspace_polytope","halfspaces":[
  {"normal":[1,0],"offset":1},{"normal":[-1,0],"offset":1},{"normal":[0,1],"offset":1},{"normal":[0,-1],"offset":1}]},
  "points":{"x":[0,0],"y":[0.5,0]}})";

const char* kHalfDisk = R"({"space":"hyperbolic2","domain":{"boundaries_disk":[{"ideal_endpoints":[[1,0],[-1,0]]}]},
  "points":{"x":[0,0.5]}})";

TEST(ParseScene, UnitSquare) {
  const auto s = parse_scene(kSquare);
  EXPECT_EQ(s.space, Space::Euclidean);
  ASSERT_TRUE(s.body);
  EXPECT_EQ(s.body->kind(), euclid::ConvexBody::Kind::Polytope);
  EXPECT_EQ(s.body->as_polytope()->halfspaces.size(), 4u);
  EXPECT_EQ(s.euclid_point("y"), funkspace::testing::v2(0.5, 0));
  EXPECT_TRUE(s.warnings.empty());
}

TEST(ParseScene, HalfDisk) {
  const auto s = parse_scene(kHalfDisk);
  EXPECT_EQ(s.space, Space::Hyperbolic2);
  ASSERT_TRUE(s.domain);
  ASSERT_EQ(s.domain->boundaries.size(), 1u);
  // The diameter geodesic is the plane p2 = 0.
  const auto& n = s.domain->boundaries[0].normal();
  EXPECT_NEAR(std::abs(n(1)), 1.0, 1e-12);
  EXPECT_NEAR(n(0), 0.0, 1e-12);
  EXPECT_NEAR(n(2), 0.0, 1e-12);
  EXPECT_TRUE(hyp::domain_contains(*s.domain, s.hyp_point("x")));
}

TEST(ParseScene, OtherBodies) {
  EXPECT_EQ(parse_scene(R"({"space":"euclidean","body":{"type":"ball","center":[0,0,0],"radius":2}})")
                .body->kind(),
            euclid::ConvexBody::Kind::Ellipsoid);
  EXPECT_EQ(parse_scene(R"({"space":"euclidean","body":{"type":"lp_ball","center":[0,0],"radius":1,"p":3}})")
                .body->kind(),
            euclid::ConvexBody::Kind::Oracle);
  const auto e = parse_scene(R"({"space":"euclidean","body":{"type":"ellipsoid","center":[0,0],"radii":[2,1],
      "axes":[[0,1],[-1,0]]},"points":{"a":[0,1.5]}})");
  EXPECT_TRUE(euclid::contains_interior(*e.body, e.euclid_point("a")));
}

TEST(ParseScene, RenormalizesWithWarning) {
  const auto s = parse_scene(R"({"space":"euclidean","body":{"type":"halfspace_polytope","halfspaces":[
    {"normal":[2,0],"offset":2},{"normal":[-1,0],"offset":1},{"normal":[0,1],"offset":1},{"normal":[0,-1],"offset":1}]}})");
  EXPECT_EQ(s.warnings.size(), 1u);
  EXPECT_NEAR(s.body->as_polytope()->halfspaces[0].offset, 1.0, 1e-15);
}

TEST(ParseScene, Errors) {
  EXPECT_ERROR_CODE(parse_scene("{not json"), ErrorCode::ParseError);
  EXPECT_ERROR_CODE(parse_scene("[1,2]"), ErrorCode::ParseError);
  EXPECT_ERROR_CODE(parse_scene(R"({"space":"euclidean","body":{"type":"halfspace_polytope","halfspaces":[
      {"normal":[1,0],"offset":-1},{"normal":[-1,0],"offset":-1}]}})"),
                    ErrorCode::ValidationError);
  EXPECT_ERROR_CODE(parse_scene(R"({"space":"euclidean","body":{"type":"ball","center":[0,0],"radius":1},
      "points":{"far":[3,0]}})"),
                    ErrorCode::ValidationError);
  EXPECT_ERROR_CODE(parse_scene(R"({"space":"hyperbolic2","domain":{"boundaries_disk":[
      {"ideal_endpoints":[[1,0],[-1,0]]}]},"points":{"x":[0,1.2]}})"),
                    ErrorCode::ValidationError);
  EXPECT_ERROR_CODE(parse_scene(R"({"space":"spherical"})"), ErrorCode::ValidationError);
  EXPECT_ERROR_CODE(parse_scene(R"({"space":"euclidean","body":{"type":"blob"}})"), ErrorCode::ValidationError);
  EXPECT_ERROR_CODE(parse_scene(R"({"space":"euclidean","body":{"type":"ball","center":[0,0],"radius":1},
      "points":{"x":[0,0,0]}})"),
                    ErrorCode::ValidationError);
}

TEST(Scene, UnknownPointAndWrongSpace) {
  const auto s = parse_scene(kSquare);
  EXPECT_ERROR_CODE(s.point("z"), ErrorCode::UnknownPoint);
  EXPECT_ERROR_CODE(s.hyp_point("x"), ErrorCode::MetricSpaceMismatch);
}

TEST(Scene, RoundTrip) {
  for (const char* text : {kSquare, kHalfDisk}) {
    const auto a = parse_scene(text);
    const auto b = parse_scene(serialize_scene(a));
    EXPECT_EQ(serialize_scene(a), serialize_scene(b));
    ASSERT_EQ(a.points.size(), b.points.size());
    for (const auto& [name, p] : a.points) EXPECT_LE((p - b.points.at(name)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Scene, RoundTripKeepsMetadata) {
  const auto a = parse_scene(R"({"space":"euclidean","label":"demo","seed":9,
      "body":{"type":"box","lo":[-1,-2],"hi":[1,2]},"points":{"p":[0.125,-0.3]}})");
  const auto b = parse_scene(serialize_scene(a));
  EXPECT_EQ(b.label, "demo");
  EXPECT_EQ(b.seed, 9u);
  EXPECT_EQ(b.euclid_point("p"), a.euclid_point("p"));
}

TEST(Scene, LoadMissingFile) {
  EXPECT_ERROR_CODE(load_scene("/nonexistent/scene.json"), ErrorCode::IOError);
}

}  // namespace
