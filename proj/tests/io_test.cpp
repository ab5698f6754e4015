#include "cdvrp/io.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "cdvrp/errors.hpp"
#include "cdvrp/solvers.hpp"
#include "test_support.hpp"

namespace cdvrp {
namespace {

using testing::data_path;
using testing::read_text;

ParseError parse_failure(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ParseError for:\n" << text;
  return ParseError("none", 0, 0);
}

TEST(ParseInstance, MinimalMatrixFile) {
  const auto inst = parse_instance(read_text(data_path("minimal.vrp")));
  ASSERT_EQ(inst.size(), 2u);
  EXPECT_EQ(inst.distance(0, 1), 1.0);
  EXPECT_EQ(inst.distance(1, 0), 1.0);
  EXPECT_EQ(inst.demand(1), 1.0);
  ASSERT_EQ(inst.fleet().size(), 1u);
  EXPECT_EQ(inst.fleet()[0].capacity, 1.0);
  EXPECT_EQ(inst.fleet()[0].distance_bound, 4.0);
  EXPECT_FALSE(inst.fleet()[0].multiplicity.has_value());
  EXPECT_FALSE(inst.coordinates().has_value());
}

TEST(ParseInstance, CoordinatesGiveEuclideanDistances) {
  const auto inst = parse_instance(read_text(data_path("i1.vrp")));
  EXPECT_EQ(inst.name(), "unit-square");
  ASSERT_EQ(inst.size(), 4u);
  EXPECT_EQ(inst.distance(0, 3), std::hypot(1.0, 1.0));
  EXPECT_EQ(inst.distance(1, 2), std::hypot(1.0, -1.0));
  ASSERT_TRUE(inst.coordinates().has_value());
  EXPECT_EQ((*inst.coordinates())[3].x, 1.0);
}

TEST(ParseInstance, MultiplicityAndSeveralClasses) {
  const auto inst = parse_instance(read_text(data_path("star_matrix.vrp")));
  ASSERT_EQ(inst.fleet().size(), 2u);
  EXPECT_EQ(inst.fleet()[1].multiplicity, std::optional<std::size_t>(2));
  EXPECT_EQ(inst.distance(3, 4), 2.0);
  EXPECT_EQ(inst.demand(3), 1.5);
}

TEST(ParseInstance, TriangleViolationPointsAtTheEntry) {
  const ParseError e = parse_failure(read_text(data_path("bad_triangle.vrp")));
  EXPECT_EQ(e.line(), 9u);
  EXPECT_EQ(e.column(), 3u);
  EXPECT_NE(std::string(e.what()).find("triangle"), std::string::npos);
}

TEST(ParseInstance, UncheckedAcceptsInvalidMetric) {
  const auto inst = parse_instance_unchecked(read_text(data_path("bad_triangle.vrp")));
  EXPECT_EQ(inst.distance(1, 2), 5.0);
  EXPECT_FALSE(validate_instance(inst).ok());
}

TEST(ParseInstance, StructuralErrors) {
  const ParseError unknown = parse_failure("SIZE 2\nWEIGHTS 1\n");
  EXPECT_EQ(unknown.line(), 2u);
  EXPECT_EQ(unknown.column(), 1u);

  const ParseError short_matrix =
      parse_failure("SIZE 3\nFLEET 0 1 4 inf\nDEMANDS 0 1 1\nMATRIX\n1\n");
  EXPECT_NE(std::string(short_matrix.what()).find("MATRIX"), std::string::npos);

  const ParseError demands = parse_failure("SIZE 2\nFLEET 0 1 4\nDEMANDS 0\nMATRIX 1\n");
  EXPECT_NE(std::string(demands.what()).find("DEMANDS"), std::string::npos);

  const ParseError number = parse_failure("SIZE 2\nFLEET 0 1 4\nDEMANDS 0 x1\nMATRIX 1\n");
  EXPECT_EQ(number.line(), 3u);
  EXPECT_EQ(number.column(), 11u);

  const ParseError both =
      parse_failure("SIZE 2\nFLEET 0 1 4\nDEMANDS 0 1\nMATRIX 1\nCOORDS 0 0 1 0\n");
  EXPECT_NE(std::string(both.what()).find("COORDS or MATRIX"), std::string::npos);

  const ParseError order = parse_failure("SIZE 2\nFLEET\n1 1 4\nDEMANDS 0 1\nMATRIX 1\n");
  EXPECT_EQ(order.line(), 3u);

  parse_failure("FLEET 0 1 4\nDEMANDS 0 1\nMATRIX 1\n");
  parse_failure("SIZE 2\nSIZE 2\nFLEET 0 1 4\nDEMANDS 0 1\nMATRIX 1\n");
}

TEST(ParseInstance, CommentsAndLayout) {
  const auto inst = parse_instance(
      "# header comment\nNAME  spaced name \nSIZE\n2\nFLEET\n0 1 4 # one class\n"
      "DEMANDS\n0\n1\nMATRIX\n1.5\n");
  EXPECT_EQ(inst.name(), "spaced name");
  EXPECT_EQ(inst.distance(0, 1), 1.5);
  EXPECT_EQ(inst.demand(1), 1.0);
}

TEST(ParseInstance, RadiusViolationPointsAtFarthestVertex) {
  const ParseError e =
      parse_failure("SIZE 3\nFLEET 0 5 2\nDEMANDS 0 1 1\nCOORDS\n0 0\n0.5 0\n2 0\n");
  EXPECT_EQ(e.line(), 7u);
  EXPECT_NE(std::string(e.what()).find("radius"), std::string::npos);
}

TEST(WriteInstance, RoundTripsMatrixAndCoordinates) {
  for (const char* file : {"minimal.vrp", "i1.vrp", "star_matrix.vrp", "mixed_fleet.vrp"}) {
    const auto inst = parse_instance(read_text(data_path(file)));
    const std::string text = write_instance(inst);
    const auto again = parse_instance(text);
    EXPECT_EQ(write_instance(again), text) << file;
    ASSERT_EQ(again.size(), inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) {
      EXPECT_EQ(again.demand(i), inst.demand(i));
      for (std::size_t j = 0; j < inst.size(); ++j) {
        EXPECT_EQ(again.distance(i, j), inst.distance(i, j)) << file;
      }
    }
  }
}

TEST(WriteInstance, RandomInstancesRoundTripExactly) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = testing::random_case(seed, 2, 10);
    const auto again = parse_instance(write_instance(inst));
    EXPECT_TRUE(std::equal(inst.matrix().begin(), inst.matrix().end(), again.matrix().begin(),
                           again.matrix().end()));
  }
}

TEST(WriteSolution, FieldOrderAndRounding) {
  const auto inst = parse_instance(read_text(data_path("i1.vrp")));
  RoutingSolution sol;
  sol.algorithm = "hand";
  sol.parameters["lambda"] = 1.0 / 3.0;
  sol.tours.push_back({make_tour(inst, {0, 3, 0}), 0});
  sol.tours.push_back({make_tour(inst, {0, 1, 2, 0}), 0});
  normalize_solution(sol);
  sol.meta["note"] = std::string("x");
  sol.meta["count"] = std::int64_t{3};
  sol.meta["flag"] = false;
  const std::string text = write_solution(sol, inst);

  const auto pos = [&](const char* key) { return text.find(std::string("\"") + key + "\""); };
  EXPECT_LT(pos("algorithm"), pos("parameters"));
  EXPECT_LT(pos("parameters"), pos("tours"));
  EXPECT_LT(pos("tours"), pos("pi"));
  EXPECT_LT(pos("pi"), pos("alpha"));
  EXPECT_LT(pos("alpha"), pos("meta"));
  EXPECT_NE(text.find("0.333333333333"), std::string::npos);
  EXPECT_EQ(text.find("0.3333333333333"), std::string::npos);
  EXPECT_NE(text.find("2.82842712475"), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}

TEST(WriteSolution, ParseThenWriteIsByteIdentical) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = testing::random_case(seed, 2, 10);
    const std::string first = write_solution(solve_bdcvrp(inst, 0.5), inst);
    const RoutingSolution back = parse_solution(first);
    EXPECT_EQ(write_solution(back, inst), first) << "seed " << seed;
    EXPECT_EQ(back.algorithm, "bdcvrp");
  }
}

TEST(WriteSolution, LengthsComeFromTheInstance) {
  const auto inst = parse_instance(read_text(data_path("i1.vrp")));
  RoutingSolution sol;
  sol.tours.push_back({make_tour(inst, {0, 1, 3, 2, 0}), 0});
  sol.tours[0].tour.length = 99.0;
  const RoutingSolution back = parse_solution(write_solution(sol, inst));
  EXPECT_EQ(back.tours[0].tour.length, 4.0);
  EXPECT_EQ(back.tours[0].tour.load, 3.0);
}

TEST(ParseSolution, ErrorsCarryLocation) {
  try {
    parse_solution("{\n  \"algorithm\": \"x\",\n  oops\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_solution("{\"algorithm\": \"x\"}"), ParseError);
  EXPECT_THROW(parse_solution("[]"), ParseError);
}

}  // namespace
}  // namespace cdvrp
