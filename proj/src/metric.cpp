#include "cdvrp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "cdvrp/errors.hpp"

namespace cdvrp {

namespace {

constexpr int kRandomInstanceAttempts = 10000;

// Uniform double in [0, 1) from the top 53 bits; unlike
// std::uniform_real_distribution this is identical on every standard library.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

FleetSpec::FleetSpec(std::vector<VehicleClass> classes) : classes_(std::move(classes)) {
  if (classes_.empty()) {
    throw StructuralError("fleet must contain at least one vehicle class");
  }
}

double FleetSpec::min_distance_bound() const {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& c : classes_) t = std::min(t, c.distance_bound);
  return t;
}

double FleetSpec::max_capacity() const {
  double q = -std::numeric_limits<double>::infinity();
  for (const auto& c : classes_) q = std::max(q, c.capacity);
  return q;
}

MetricInstance::MetricInstance(std::string name, std::size_t n, std::vector<double> dist,
                               std::vector<double> demand, FleetSpec fleet,
                               std::optional<std::vector<Point>> coordinates)
    : name_(std::move(name)),
      n_(n),
      dist_(std::move(dist)),
      demand_(std::move(demand)),
      fleet_(std::move(fleet)),
      coordinates_(std::move(coordinates)) {
  if (n_ == 0) throw StructuralError("instance needs at least the depot");
  if (dist_.size() != n_ * n_) {
    throw StructuralError("distance matrix has " + std::to_string(dist_.size()) +
                          " entries, expected " + std::to_string(n_ * n_));
  }
  if (demand_.size() != n_) {
    throw StructuralError("demand list has " + std::to_string(demand_.size()) +
                          " entries, expected " + std::to_string(n_));
  }
  if (coordinates_ && coordinates_->size() != n_) {
    throw StructuralError("coordinate list length does not match vertex count");
  }
}

MetricInstance MetricInstance::from_rows(std::string name,
                                         const std::vector<std::vector<double>>& rows,
                                         std::vector<double> demand, FleetSpec fleet) {
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw StructuralError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " entries in a " + std::to_string(n) + "x" + std::to_string(n) +
                            " matrix");
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return MetricInstance(std::move(name), n, std::move(flat), std::move(demand), std::move(fleet));
}

double MetricInstance::depot_radius() const { return distance(kDepot, farthest_vertex()); }

VertexId MetricInstance::farthest_vertex() const {
  VertexId best = kDepot;
  for (VertexId v = 1; v < n_; ++v) {
    if (distance(kDepot, v) > distance(kDepot, best)) best = v;
  }
  return best;
}

MetricInstance MetricInstance::with_fleet(FleetSpec fleet) const {
  return MetricInstance(name_, n_, dist_, demand_, std::move(fleet), coordinates_);
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDiagonal: return "diagonal";
    case ViolationKind::kSymmetry: return "symmetry";
    case ViolationKind::kNegative: return "negative";
    case ViolationKind::kTriangle: return "triangle";
    case ViolationKind::kDemandSign: return "demand-sign";
    case ViolationKind::kDepotDemand: return "depot-demand";
    case ViolationKind::kRadius: return "radius";
    case ViolationKind::kFleet: return "fleet";
  }
  return "unknown";
}

std::string describe(const Violation& violation) {
  std::ostringstream out;
  out << to_string(violation.kind) << " (";
  for (std::size_t i = 0; i < violation.witness.size(); ++i) {
    if (i) out << ",";
    out << violation.witness[i];
  }
  out << ") magnitude " << violation.magnitude;
  return out.str();
}

ValidationReport validate_instance(const MetricInstance& inst, double triangle_tolerance) {
  ValidationReport report;
  auto& out = report.violations;
  const std::size_t n = inst.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (inst.distance(i, i) != 0.0) {
      out.push_back({ViolationKind::kDiagonal, {i}, std::abs(inst.distance(i, i))});
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (inst.distance(i, j) != inst.distance(j, i)) {
        out.push_back({ViolationKind::kSymmetry, {i, j},
                       std::abs(inst.distance(i, j) - inst.distance(j, i))});
      }
      if (inst.distance(i, j) < 0.0 || inst.distance(j, i) < 0.0) {
        out.push_back({ViolationKind::kNegative, {i, j},
                       -std::min(inst.distance(i, j), inst.distance(j, i))});
      }
    }
  }

  // Each unordered pair (i, k) once, every intermediate j.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double direct = inst.distance(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double detour = inst.distance(i, j) + inst.distance(j, k);
        const double slack = triangle_tolerance * std::max(1.0, detour);
        if (direct > detour + slack) {
          out.push_back({ViolationKind::kTriangle, {i, j, k}, direct - detour});
        }
      }
    }
  }

  if (inst.demand(kDepot) != 0.0) {
    out.push_back({ViolationKind::kDepotDemand, {kDepot}, std::abs(inst.demand(kDepot))});
  }
  for (VertexId v = 1; v < n; ++v) {
    if (inst.demand(v) < 0.0) out.push_back({ViolationKind::kDemandSign, {v}, -inst.demand(v)});
  }

  const auto& fleet = inst.fleet();
  for (std::size_t c = 0; c < fleet.size(); ++c) {
    if (!(fleet[c].distance_bound > 0.0)) {
      out.push_back({ViolationKind::kFleet, {c}, -fleet[c].distance_bound});
    }
    if (fleet[c].capacity < 0.0) out.push_back({ViolationKind::kFleet, {c}, -fleet[c].capacity});
  }

  const double half_tmin = fleet.min_distance_bound() / 2.0;
  const double radius = inst.depot_radius();
  if (radius > half_tmin + kLengthTolerance) {
    out.push_back({ViolationKind::kRadius, {inst.farthest_vertex()}, radius - half_tmin});
  }
  return report;
}

InvalidInstanceError::InvalidInstanceError(ValidationReport report)
    : InfeasibleError("invalid instance: " + describe(report.violations.front()),
                      report.violations.front().kind == ViolationKind::kRadius
                          ? report.violations.front().witness.front()
                          : kNoVertex),
      report_(std::move(report)) {}

void require_valid(const MetricInstance& inst) {
  auto report = validate_instance(inst);
  if (!report.ok()) throw InvalidInstanceError(std::move(report));
}

MetricInstance euclidean_instance(const std::vector<Point>& points, std::vector<double> demands,
                                  FleetSpec fleet, std::string name) {
  if (points.size() != demands.size()) {
    throw StructuralError("got " + std::to_string(points.size()) + " points but " +
                          std::to_string(demands.size()) + " demands");
  }
  const std::size_t n = points.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(points[i].x - points[j].x, points[i].y - points[j].y);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  return MetricInstance(std::move(name), n, std::move(dist), std::move(demands), std::move(fleet),
                        points);
}

MetricInstance random_instance(std::size_t n, std::uint64_t seed, double box, DemandRange demands,
                               const FleetSpec& fleet) {
  if (n == 0) throw StructuralError("random_instance needs n >= 1");
  std::mt19937_64 rng(seed);
  const double half_tmin = fleet.min_distance_bound() / 2.0;
  const std::string name = "random-n" + std::to_string(n) + "-s" + std::to_string(seed);

  for (int attempt = 0; attempt < kRandomInstanceAttempts; ++attempt) {
    std::vector<Point> points(n);
    std::vector<double> demand(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      points[i].x = box * unit_uniform(rng);
      points[i].y = box * unit_uniform(rng);
    }
    for (std::size_t i = 1; i < n; ++i) {
      demand[i] = demands.low + (demands.high - demands.low) * unit_uniform(rng);
    }
    bool within = true;
    for (std::size_t i = 1; i < n && within; ++i) {
      within = std::hypot(points[i].x - points[0].x, points[i].y - points[0].y) <= half_tmin;
    }
    if (within) return euclidean_instance(points, std::move(demand), fleet, name);
  }
  throw InfeasibleError("random_instance: no sample with depot radius <= T_min/2 after " +
                        std::to_string(kRandomInstanceAttempts) + " attempts");
}

SubInstance induced_subinstance(const MetricInstance& inst, std::span<const VertexId> subset) {
  std::vector<VertexId> keep(subset.begin(), subset.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty() || keep.front() != kDepot) {
    throw StructuralError("induced_subinstance: subset must contain the depot");
  }
  if (keep.back() >= inst.size()) {
    throw StructuralError("induced_subinstance: vertex " + std::to_string(keep.back()) +
                          " out of range");
  }

  const std::size_t m = keep.size();
  std::vector<double> dist(m * m);
  std::vector<double> demand(m);
  for (std::size_t a = 0; a < m; ++a) {
    demand[a] = inst.demand(keep[a]);
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = inst.distance(keep[a], keep[b]);
  }
  std::optional<std::vector<Point>> coords;
  if (inst.coordinates()) {
    coords.emplace();
    for (VertexId v : keep) coords->push_back((*inst.coordinates())[v]);
  }
  return SubInstance{MetricInstance(inst.name(), m, std::move(dist), std::move(demand),
                                    inst.fleet(), std::move(coords)),
                     std::move(keep)};
}

}  // namespace cdvrp
