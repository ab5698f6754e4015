#ifndef CDVRP_METRIC_HPP
#define CDVRP_METRIC_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdvrp/errors.hpp"

namespace cdvrp {

// Dense vertex index in [0, n). The depot is always vertex 0.
using VertexId = std::size_t;
inline constexpr VertexId kDepot = 0;

// Slack used for every length comparison (distance bounds, triangle checks).
inline constexpr double kLengthTolerance = 1e-9;
// Slack used for every load/capacity comparison.
inline constexpr double kLoadTolerance = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct VehicleClass {
  double capacity = 0.0;
  double distance_bound = 0.0;
  // std::nullopt means the class may be used any number of times.
  std::optional<std::size_t> multiplicity;
};

class FleetSpec {
 public:
  // Throws StructuralError when `classes` is empty.
  explicit FleetSpec(std::vector<VehicleClass> classes);

  std::size_t size() const { return classes_.size(); }
  const VehicleClass& operator[](std::size_t i) const { return classes_[i]; }
  std::span<const VehicleClass> classes() const { return classes_; }

  // T_min, the tightest distance bound over all classes.
  double min_distance_bound() const;
  double max_capacity() const;

 private:
  std::vector<VehicleClass> classes_;
};

// Symmetric metric over n vertices with per-vertex demands and a fleet.
// Immutable once built; the constructor only checks shapes, metric
// properties are checked by validate_instance().
class MetricInstance {
 public:
  // `dist` is row-major n*n. Throws StructuralError on any shape mismatch.
  MetricInstance(std::string name, std::size_t n, std::vector<double> dist,
                 std::vector<double> demand, FleetSpec fleet,
                 std::optional<std::vector<Point>> coordinates = std::nullopt);

  static MetricInstance from_rows(std::string name, const std::vector<std::vector<double>>& rows,
                                  std::vector<double> demand, FleetSpec fleet);

  std::size_t size() const { return n_; }
  std::size_t customer_count() const { return n_ - 1; }

  double distance(VertexId a, VertexId b) const { return dist_[a * n_ + b]; }
  std::span<const double> row(VertexId a) const {
    return std::span<const double>(dist_).subspan(a * n_, n_);
  }
  std::span<const double> matrix() const { return dist_; }

  double demand(VertexId v) const { return demand_[v]; }
  std::span<const double> demands() const { return demand_; }

  const FleetSpec& fleet() const { return fleet_; }
  const std::string& name() const { return name_; }

  // Present for instances built from planar points.
  const std::optional<std::vector<Point>>& coordinates() const { return coordinates_; }

  // Delta: the largest depot-to-vertex distance (0 for a depot-only instance).
  double depot_radius() const;
  // Vertex realising depot_radius(); the depot itself when n == 1.
  VertexId farthest_vertex() const;

  // Same metric and demands under a different fleet.
  MetricInstance with_fleet(FleetSpec fleet) const;

 private:
  std::string name_;
  std::size_t n_;
  std::vector<double> dist_;
  std::vector<double> demand_;
  FleetSpec fleet_;
  std::optional<std::vector<Point>> coordinates_;
};

enum class ViolationKind {
  kDiagonal,    // dist[i][i] != 0
  kSymmetry,    // dist[i][j] != dist[j][i]
  kNegative,    // dist[i][j] < 0
  kTriangle,    // dist[i][k] > dist[i][j] + dist[j][k] beyond tolerance
  kDemandSign,  // negative demand
  kDepotDemand, // demand[0] != 0
  kRadius,      // Delta > T_min / 2
  kFleet,       // a class with T <= 0 or Q < 0
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  // Vertex (or class) indices that witness the violation. For triangle
  // violations this is (i, j, k) with j the intermediate vertex.
  std::vector<std::size_t> witness;
  // How far the violated inequality is off, in the units of the quantity.
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

std::string describe(const Violation& violation);

// `triangle_tolerance` is relative: dist[i][k] may exceed
// dist[i][j] + dist[j][k] by tolerance * max(1, dist[i][j] + dist[j][k]).
ValidationReport validate_instance(const MetricInstance& inst,
                                   double triangle_tolerance = kLengthTolerance);

// Raised by solvers handed an instance that fails validate_instance().
class InvalidInstanceError : public InfeasibleError {
 public:
  explicit InvalidInstanceError(ValidationReport report);

  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Throws InvalidInstanceError when validation fails.
void require_valid(const MetricInstance& inst);

// points[0] is the depot. Throws StructuralError on a length mismatch.
MetricInstance euclidean_instance(const std::vector<Point>& points, std::vector<double> demands,
                                  FleetSpec fleet, std::string name = "euclidean");

struct DemandRange {
  double low = 1.0;
  double high = 1.0;
};

// Uniform points in [0, box]^2 (depot included), uniform demands in the
// range. Resamples until Delta <= T_min / 2; throws InfeasibleError after
// the retry budget runs out. Deterministic for a fixed seed.
MetricInstance random_instance(std::size_t n, std::uint64_t seed, double box, DemandRange demands,
                               const FleetSpec& fleet);

struct SubInstance {
  MetricInstance instance;
  // original[new_id] = id in the parent instance; original[0] == kDepot.
  std::vector<VertexId> original;
};

// Restriction to `subset` (must contain the depot). Retained vertices are
// renumbered in ascending original order.
SubInstance induced_subinstance(const MetricInstance& inst, std::span<const VertexId> subset);

}  // namespace cdvrp

#endif  // CDVRP_METRIC_HPP
