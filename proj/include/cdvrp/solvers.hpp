#ifndef CDVRP_SOLVERS_HPP
#define CDVRP_SOLVERS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cdvrp/metric.hpp"
#include "cdvrp/tree_tour.hpp"

namespace cdvrp {

using MetaValue = std::variant<bool, std::int64_t, double, std::string>;

struct AssignedTour {
  Tour tour;
  std::size_t class_id = 0;
};

struct RoutingSolution {
  std::string algorithm;
  std::map<std::string, double> parameters;
  std::vector<AssignedTour> tours;
  // Number of tours.
  std::size_t pi = 0;
  // Shortest over longest tour length; 1 when there is at most one tour.
  double alpha = 1.0;
  std::map<std::string, MetaValue> meta;
};

// Sorts tours by first customer id and recomputes pi and alpha. Every
// solver output passes through here so results do not depend on the order
// in which bins were processed.
void normalize_solution(RoutingSolution& sol);

// min / max of strictly positive lengths. Throws std::invalid_argument on an
// empty list or a nonpositive entry.
double balance_ratio(std::span<const double> lengths);

// Distance-constrained routing on one class: MST, doubled and shortcut into
// a single tour, then split into depot round trips of length <= T.
// Throws InfeasibleError naming the farthest vertex when Delta > T / 2.
std::vector<Tour> solve_dvrp(const MetricInstance& inst, double distance_bound);

// Bin-pack the demands onto the fleet classes, then route each bin with
// solve_dvrp under its class's distance bound.
RoutingSolution solve_min_nt(const MetricInstance& inst);

struct BalancedPaths {
  std::vector<Path> paths;
  // Padding per path: how many times its closed tour is traversed (0 when
  // the path is used as is) and the resulting length.
  std::vector<std::size_t> repetitions;
  std::vector<double> effective_lengths;
  std::size_t k = 0;
  double max_len = 0.0;
  double min_len = 0.0;
  double alpha = 1.0;

  double lambda = 0.0;
  std::size_t peel_count = 0;
  double max_tree_edge = 0.0;
  // True when the longest MST edge is at most lambda / 4; every path is then
  // at most lambda. Otherwise paths are bounded by lambda + 2 * max_tree_edge.
  bool length_guarantee = false;
  double length_bound = 0.0;
};

// Balanced path cover by peeling the minimum spanning tree. While the tree
// weighs more than lambda (or its own shortcut path would exceed lambda), a
// bundle of weight in (lambda/4, lambda/2] under the edge precondition is
// peeled from the deepest vertex whose subtree weighs more than lambda/4 and
// turned into a path; the remaining tree gives the final path. Every vertex,
// depot included, appears in exactly one path.
// Throws std::invalid_argument when lambda <= 0.
BalancedPaths solve_min_nht(const MetricInstance& inst, double lambda, bool pad);

// Capacity bins, balanced peeling per bin with lambda = T of the bin's class,
// paths closed into depot round trips. Reports the achieved alpha and whether
// it reaches `alpha_target`. Throws std::invalid_argument unless
// 0 < alpha_target < 1.
RoutingSolution solve_bdcvrp(const MetricInstance& inst, double alpha_target);

// Distance-only balanced routing for a whole instance: solve_min_nht with
// the given lambda, paths closed into depot round trips, then fitted to the
// fleet (split by capacity, then by distance, only where a class bound would
// be broken).
RoutingSolution solve_min_nht_routes(const MetricInstance& inst, double lambda);

struct PaddingChain {
  std::size_t tour_index = 0;
  // Last customer of the original tour; the chain hangs off it.
  VertexId attach = 0;
  double deficit = 0.0;
  // Distance from `attach` back to the depot, reused as the chain's last edge.
  double closing = 0.0;
  // Added vertices in chain order.
  std::vector<VertexId> added;
  // segments[i] is the edge ending at added[i].
  std::vector<double> segments;
};

struct GadgetInstance {
  MetricInstance base;
  MetricInstance instance;
  std::vector<PaddingChain> padding;
  RoutingSolution padded;
  double alpha_target = 0.0;
  double max_length = 0.0;
};

// Pads every shorter tour of a feasible solution with a chain of zero-demand
// vertices so that all tours reach the longest tour's length. The gadget's
// matrix is the shortest-path closure of the base metric plus the chains,
// with the base block kept bit-identical; class distance bounds are raised to
// at least the longest tour length when padding occurs.
// Throws InfeasibleError when `sol` is not feasible on `inst`, and
// std::invalid_argument unless 0 < alpha < 1.
GadgetInstance reduce_dcvrp_to_bdcvrp(const MetricInstance& inst, const RoutingSolution& sol,
                                      double alpha);

}  // namespace cdvrp

#endif  // CDVRP_SOLVERS_HPP
