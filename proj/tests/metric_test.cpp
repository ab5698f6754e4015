#include "cdvrp/metric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cdvrp/errors.hpp"
#include "test_support.hpp"

namespace cdvrp {
namespace {

using testing::single_class;
using testing::unit_square;

bool has_kind(const ValidationReport& r, ViolationKind k) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

TEST(ValidateInstance, SmallestValidMetric) {
  const auto inst = MetricInstance::from_rows("two", {{0, 1}, {1, 0}}, {0, 1}, single_class(1, 4));
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(ValidateInstance, TriangleViolationWitness) {
  const auto inst = MetricInstance::from_rows("bad", {{0, 1, 1}, {1, 0, 5}, {1, 5, 0}}, {0, 1, 1},
                                              single_class(5, 10));
  const auto report = validate_instance(inst);
  ASSERT_FALSE(report.ok());
  ASSERT_EQ(report.violations.size(), 1u);
  const auto& v = report.violations.front();
  EXPECT_EQ(v.kind, ViolationKind::kTriangle);
  EXPECT_EQ(v.witness, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_DOUBLE_EQ(v.magnitude, 3.0);
}

TEST(ValidateInstance, UnitSquareRadiusTooLarge) {
  const auto inst = unit_square(single_class(3, 2));
  const auto report = validate_instance(inst);
  ASSERT_FALSE(report.ok());
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, ViolationKind::kRadius);
  EXPECT_EQ(report.violations[0].witness, (std::vector<std::size_t>{3}));
  EXPECT_NEAR(inst.depot_radius(), 1.4142135623730951, 1e-15);
  EXPECT_NEAR(report.violations[0].magnitude, std::sqrt(2.0) - 1.0, 1e-15);
}

TEST(ValidateInstance, ReportsEveryKind) {
  std::vector<double> dist{0, 2, 1,  //
                           1, 0.5, 1,  //
                           1, 1, 0};
  MetricInstance inst("messy", 3, dist, {1, -1, 0},
                      FleetSpec({{-1, 1, std::nullopt}, {1, 0, std::nullopt}}));
  const auto report = validate_instance(inst);
  EXPECT_TRUE(has_kind(report, ViolationKind::kDiagonal));
  EXPECT_TRUE(has_kind(report, ViolationKind::kSymmetry));
  EXPECT_TRUE(has_kind(report, ViolationKind::kDepotDemand));
  EXPECT_TRUE(has_kind(report, ViolationKind::kDemandSign));
  EXPECT_TRUE(has_kind(report, ViolationKind::kFleet));
  EXPECT_TRUE(has_kind(report, ViolationKind::kRadius));
}

TEST(ValidateInstance, TriangleToleranceIsRelative) {
  const double big = 1e6;
  const auto inst = MetricInstance::from_rows(
      "loose", {{0, big, big}, {big, 0, 2 * big + 1e-4}, {big, 2 * big + 1e-4, 0}}, {0, 1, 1},
      single_class(5, 4 * big));
  EXPECT_TRUE(validate_instance(inst).ok());
  EXPECT_FALSE(validate_instance(inst, 0.0).ok());
}

TEST(MetricInstance, MalformedShapesAreStructuralErrors) {
  EXPECT_THROW(MetricInstance::from_rows("x", {{0, 1}, {1}}, {0, 1}, single_class(1, 1)),
               StructuralError);
  EXPECT_THROW(MetricInstance("x", 2, {0, 1, 1}, {0, 1}, single_class(1, 1)), StructuralError);
  EXPECT_THROW(MetricInstance("x", 2, {0, 1, 1, 0}, {0}, single_class(1, 1)), StructuralError);
  EXPECT_THROW(FleetSpec({}), StructuralError);
}

TEST(EuclideanInstance, Distances) {
  const auto pair = euclidean_instance({{0, 0}, {3, 4}}, {0, 1}, single_class(1, 10));
  EXPECT_EQ(pair.distance(0, 1), 5.0);

  const auto sq = unit_square(single_class(3, 6));
  EXPECT_NEAR(sq.distance(0, 3), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(sq.distance(1, 3), 1.0);

  const auto lone = euclidean_instance({{2, 2}}, {0}, single_class(1, 1));
  EXPECT_EQ(lone.size(), 1u);
  EXPECT_EQ(lone.distance(0, 0), 0.0);
  EXPECT_EQ(lone.depot_radius(), 0.0);
}

TEST(EuclideanInstance, LengthMismatch) {
  EXPECT_THROW(euclidean_instance({{0, 0}, {1, 1}}, {0}, single_class(1, 1)), StructuralError);
}

TEST(EuclideanInstance, TriangleHoldsUpToRounding) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 9; ++i) {
      pts.push_back({testing::uniform(rng, -50, 50), testing::uniform(rng, -50, 50)});
    }
    const auto inst =
        euclidean_instance(pts, std::vector<double>(pts.size(), 0.0), single_class(1, 1e6));
    for (std::size_t i = 0; i < inst.size(); ++i) {
      for (std::size_t j = 0; j < inst.size(); ++j) {
        ASSERT_EQ(inst.distance(i, j), inst.distance(j, i));
        for (std::size_t k = 0; k < inst.size(); ++k) {
          ASSERT_LE(inst.distance(i, k), inst.distance(i, j) + inst.distance(j, k) + 1e-12);
        }
      }
    }
  }
}

TEST(RandomInstance, DeterministicForFixedSeed) {
  const auto fleet = single_class(10, 10);
  const auto a = random_instance(5, 7, 1.0, {1, 3}, fleet);
  const auto b = random_instance(5, 7, 1.0, {1, 3}, fleet);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_TRUE(std::equal(a.matrix().begin(), a.matrix().end(), b.matrix().begin()));
  EXPECT_TRUE(std::equal(a.demands().begin(), a.demands().end(), b.demands().begin()));
  const auto c = random_instance(5, 8, 1.0, {1, 3}, fleet);
  EXPECT_FALSE(std::equal(a.matrix().begin(), a.matrix().end(), c.matrix().begin()));
}

TEST(RandomInstance, DepotOnly) {
  const auto inst = random_instance(1, 12345, 1.0, {1, 1}, single_class(1, 1));
  EXPECT_EQ(inst.size(), 1u);
  EXPECT_EQ(inst.depot_radius(), 0.0);
  EXPECT_EQ(inst.demand(0), 0.0);
}

TEST(RandomInstance, GeneratedInstanceValidates) {
  const auto inst = random_instance(6, 1, 1.0, {1, 1}, single_class(10, 10));
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(RandomInstance, ResamplesUntilRadiusFits) {
  // T_min / 2 = 0.4 inside a unit box forces resampling.
  const auto inst = random_instance(4, 3, 1.0, {1, 1}, single_class(10, 0.8));
  EXPECT_LE(inst.depot_radius(), 0.4);
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(RandomInstance, GivesUpWhenRadiusUnreachable) {
  EXPECT_THROW(random_instance(30, 3, 100.0, {1, 1}, single_class(10, 1e-6)), InfeasibleError);
}

TEST(InducedSubinstance, IdentityOnFullSet) {
  const auto inst = unit_square(single_class(3, 6));
  const std::vector<VertexId> all{0, 1, 2, 3};
  const auto sub = induced_subinstance(inst, all);
  EXPECT_EQ(sub.original, all);
  EXPECT_TRUE(std::equal(inst.matrix().begin(), inst.matrix().end(), sub.instance.matrix().begin(),
                         sub.instance.matrix().end()));
}

TEST(InducedSubinstance, DepotAndFarCorner) {
  const auto inst = unit_square(single_class(3, 6));
  const std::vector<VertexId> subset{3, 0};
  const auto sub = induced_subinstance(inst, subset);
  ASSERT_EQ(sub.instance.size(), 2u);
  EXPECT_EQ(sub.original, (std::vector<VertexId>{0, 3}));
  EXPECT_NEAR(sub.instance.distance(0, 1), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(sub.instance.demand(1), 1.0);
}

TEST(InducedSubinstance, DepotOnlyAndMissingDepot) {
  const auto inst = unit_square(single_class(3, 6));
  const std::vector<VertexId> depot{0};
  EXPECT_EQ(induced_subinstance(inst, depot).instance.size(), 1u);
  const std::vector<VertexId> no_depot{1, 2};
  EXPECT_THROW(induced_subinstance(inst, no_depot), StructuralError);
}

TEST(InducedSubinstance, PreservesDistancesExactly) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = testing::random_case(seed, 3, 12);
    std::vector<VertexId> subset{0};
    for (VertexId v = 1; v < inst.size(); ++v) {
      if ((seed >> (v % 5)) & 1u || v % 3 == 0) subset.push_back(v);
    }
    const auto sub = induced_subinstance(inst, subset);
    for (std::size_t a = 0; a < sub.original.size(); ++a) {
      for (std::size_t b = 0; b < sub.original.size(); ++b) {
        ASSERT_EQ(sub.instance.distance(a, b), inst.distance(sub.original[a], sub.original[b]));
      }
    }
    EXPECT_TRUE(validate_instance(sub.instance).ok());
  }
}

}  // namespace
}  // namespace cdvrp
