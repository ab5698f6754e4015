#ifndef CDVRP_ORACLE_HPP
#define CDVRP_ORACLE_HPP

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdvrp/binpack.hpp"
#include "cdvrp/metric.hpp"
#include "cdvrp/solvers.hpp"
#include "cdvrp/tree_tour.hpp"

namespace cdvrp {

enum class VerifyKind { kCoverage, kDuplicate, kCapacity, kDistance, kBalance, kEndpoint };

std::string_view to_string(VerifyKind kind);

struct VerifyViolation {
  // Tour the problem was found in; std::nullopt for solution-wide problems
  // (a customer no tour visits, the balance ratio).
  std::optional<std::size_t> tour;
  VerifyKind kind;
  double magnitude = 0.0;
  // The customer involved in coverage/duplicate violations.
  std::optional<VertexId> vertex;
};

struct VerifyReport {
  std::vector<VerifyViolation> violations;

  bool ok() const { return violations.empty(); }
};

std::string describe(const VerifyViolation& violation);

// Checks a solution against the instance using only the distance matrix,
// demands and fleet. Stored lengths, loads, pi and alpha are never trusted.
// Throws std::out_of_range on a class id or vertex id outside the instance.
VerifyReport verify_solution(const MetricInstance& inst, const RoutingSolution& sol,
                             std::optional<double> alpha_target = std::nullopt);

struct OracleLimits {
  // Largest vertex count (depot included) the exhaustive searches accept.
  std::size_t max_n = 7;
  // Largest item count exact_pack accepts.
  std::size_t max_items = 8;
  // Cap on enumerated search states.
  std::size_t max_states = 50'000'000;
  std::chrono::milliseconds time_cap{60'000};
};

// Minimum number of tours, by dynamic programming over customer subsets:
// every subset's shortest depot round trip (Held-Karp), then a partition
// into class-feasible blocks with the lowest customer always in the first
// block. Returns std::nullopt when no feasible solution exists.
// Throws ResourceLimitError when a cap in `limits` is hit.
std::optional<RoutingSolution> exact_min_tours(const MetricInstance& inst,
                                               const OracleLimits& limits = {});

// Minimum total bin size over all partitions of the items, each block in
// the smallest class that holds it. Throws InfeasibleError for an item no
// class holds and ResourceLimitError above limits.max_items.
Packing exact_pack(std::span<const Item> items, std::span<const BinClass> classes,
                   const OracleLimits& limits = {});

// Optimal closed tour from the depot through every vertex by enumerating
// permutations in lexicographic order; the first optimum found is kept.
// Throws ResourceLimitError above 10 vertices.
Tour exact_tsp(const MetricInstance& inst);

}  // namespace cdvrp

#endif  // CDVRP_ORACLE_HPP
