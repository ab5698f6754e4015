#ifndef CDVRP_TREE_TOUR_HPP
#define CDVRP_TREE_TOUR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cdvrp/metric.hpp"

namespace cdvrp {

// Closed walk. seq starts and ends at the same vertex ([v] for a single
// vertex, empty when nothing is left to visit).
struct Tour {
  std::vector<VertexId> seq;
  double length = 0.0;
  double load = 0.0;
};

// Open walk obtained from a Tour by dropping one edge.
struct Path {
  std::vector<VertexId> seq;
  double length = 0.0;
};

// Sum of consecutive distances along `seq`.
double walk_length(const MetricInstance& inst, std::span<const VertexId> seq);

// Builds a Tour from a closed sequence, computing length and the load of
// the distinct vertices it visits.
Tour make_tour(const MetricInstance& inst, std::vector<VertexId> seq);

struct PeeledBundle;

// Spanning tree over a subset of vertices, rooted at the depot, with the
// subtree-weight bookkeeping the peeling loop needs. Vertex ids are those of
// the instance the tree was built on.
class RootedTree {
 public:
  static constexpr VertexId kNone = static_cast<VertexId>(-1);

  RootedTree(std::size_t vertex_count, VertexId root);

  VertexId root() const { return root_; }
  bool contains(VertexId v) const { return v < live_.size() && live_[v]; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  double edge_weight(VertexId v) const { return edge_w_[v]; }
  // Weight of the edges strictly below v (the edge to v's parent excluded).
  double inner_weight(VertexId v) const { return inner_[v]; }
  std::size_t depth(VertexId v) const { return depth_[v]; }
  std::span<const VertexId> children(VertexId v) const { return children_[v]; }
  // L(F): total weight of the live tree.
  double total_weight() const { return total_; }

  std::vector<VertexId> vertices() const;
  std::vector<std::pair<VertexId, VertexId>> edges() const;
  double max_edge_weight() const;

  // Preorder of the live subtree at v, children in ascending id. This is
  // the first-visit order of the doubled-edge Euler walk.
  std::vector<VertexId> euler_order(VertexId v) const;

  // Inner weights recomputed bottom-up from the live edges.
  std::vector<double> recompute_inner_weights() const;

 private:
  friend RootedTree minimum_spanning_tree(const MetricInstance&, std::span<const VertexId>);
  friend PeeledBundle peel_bundle(RootedTree&, VertexId, double);

  void attach(VertexId child, VertexId parent, double weight);
  void finalize();

  VertexId root_;
  std::vector<bool> live_;
  std::vector<VertexId> parent_;
  std::vector<double> edge_w_;
  std::vector<double> inner_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<VertexId>> children_;
  double total_ = 0.0;
};

struct PeeledBundle {
  // Stays in the tree.
  VertexId anchor = RootedTree::kNone;
  // Removed from the tree, ascending.
  std::vector<VertexId> vertices;
  // (parent, child) tree edges of the bundle.
  std::vector<std::pair<VertexId, VertexId>> edges;
  double weight = 0.0;
  // Anchor followed by the bundle vertices in Euler first-visit order.
  std::vector<VertexId> euler_order;
};

// Kruskal over the live vertices with ties broken by the lexicographically
// smaller (min endpoint, max endpoint) pair, so the tree is unique.
// Throws StructuralError when `live` is empty or lacks the depot.
RootedTree minimum_spanning_tree(const MetricInstance& inst, std::span<const VertexId> live);

// Deepest live vertex whose inner weight exceeds `threshold`; ties on depth
// go to the smaller id.
std::optional<VertexId> deepest_heavy_vertex(const RootedTree& tree, double threshold);

// Detaches child chunks (child subtree plus its edge to v) of v. The first
// chunk, in ascending child id, heavier than `stop_threshold` is taken on its
// own; otherwise chunks are accumulated in ascending id until the total
// exceeds `stop_threshold`. Inner weights along v's ancestor path are updated.
// Throws std::invalid_argument when v is not a live vertex with children.
PeeledBundle peel_bundle(RootedTree& tree, VertexId v, double stop_threshold);

// Shortcuts a first-visit order into a closed tour, skipping vertices with
// covered[v] set (covered may be empty).
Tour double_shortcut(const MetricInstance& inst, std::span<const VertexId> euler_order,
                     const std::vector<bool>& covered = {});

// Drops the heaviest tour edge (the last one on ties).
Path tour_to_path(const MetricInstance& inst, const Tour& tour);

// Cuts the tour's customer order into depot round trips. A segment is closed
// just before its internal length would exceed budget - 2 * Delta, where Delta
// is the largest depot distance among the tour's customers.
// Throws InfeasibleError when budget < 2 * Delta.
std::vector<Tour> split_tour_by_distance(const Tour& tour, const MetricInstance& inst,
                                         double budget);

}  // namespace cdvrp

#endif  // CDVRP_TREE_TOUR_HPP
