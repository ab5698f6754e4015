#include "cdvrp/tree_tour.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "cdvrp/errors.hpp"

namespace cdvrp {

double walk_length(const MetricInstance& inst, std::span<const VertexId> seq) {
  double total = 0.0;
  for (std::size_t i = 1; i < seq.size(); ++i) total += inst.distance(seq[i - 1], seq[i]);
  return total;
}

Tour make_tour(const MetricInstance& inst, std::vector<VertexId> seq) {
  Tour tour;
  tour.length = walk_length(inst, seq);
  std::vector<VertexId> distinct = seq;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (VertexId v : distinct) tour.load += inst.demand(v);
  tour.seq = std::move(seq);
  return tour;
}

RootedTree::RootedTree(std::size_t vertex_count, VertexId root)
    : root_(root),
      live_(vertex_count, false),
      parent_(vertex_count, kNone),
      edge_w_(vertex_count, 0.0),
      inner_(vertex_count, 0.0),
      depth_(vertex_count, 0),
      children_(vertex_count) {
  live_.at(root) = true;
}

void RootedTree::attach(VertexId child, VertexId parent, double weight) {
  live_[child] = true;
  parent_[child] = parent;
  edge_w_[child] = weight;
  depth_[child] = depth_[parent] + 1;
  children_[parent].push_back(child);
}

void RootedTree::finalize() {
  for (auto& c : children_) std::sort(c.begin(), c.end());
  inner_ = recompute_inner_weights();
  total_ = inner_[root_];
}

std::vector<VertexId> RootedTree::vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < live_.size(); ++v) {
    if (live_[v]) out.push_back(v);
  }
  return out;
}

std::vector<std::pair<VertexId, VertexId>> RootedTree::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId v = 0; v < live_.size(); ++v) {
    if (live_[v] && v != root_) out.emplace_back(parent_[v], v);
  }
  return out;
}

double RootedTree::max_edge_weight() const {
  double m = 0.0;
  for (VertexId v = 0; v < live_.size(); ++v) {
    if (live_[v] && v != root_) m = std::max(m, edge_w_[v]);
  }
  return m;
}

std::vector<VertexId> RootedTree::euler_order(VertexId v) const {
  std::vector<VertexId> order;
  if (!contains(v)) return order;
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    order.push_back(u);
    const auto& kids = children_[u];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

std::vector<double> RootedTree::recompute_inner_weights() const {
  std::vector<double> inner(live_.size(), 0.0);
  auto order = euler_order(root_);
  // Reverse preorder visits every child before its parent.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    for (VertexId c : children_[v]) inner[v] += inner[c] + edge_w_[c];
  }
  return inner;
}

RootedTree minimum_spanning_tree(const MetricInstance& inst, std::span<const VertexId> live) {
  std::vector<VertexId> verts(live.begin(), live.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.empty()) throw StructuralError("minimum_spanning_tree: empty vertex set");
  if (verts.front() != kDepot) {
    throw StructuralError("minimum_spanning_tree: vertex set must contain the depot");
  }
  if (verts.back() >= inst.size()) {
    throw StructuralError("minimum_spanning_tree: vertex out of range");
  }

  struct Edge {
    double w;
    VertexId a;
    VertexId b;
  };
  std::vector<Edge> candidates;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      candidates.push_back({inst.distance(verts[i], verts[j]), verts[i], verts[j]});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.w, x.a, x.b) < std::tie(y.w, y.a, y.b);
  });

  std::vector<VertexId> uf(inst.size());
  std::iota(uf.begin(), uf.end(), VertexId{0});
  auto find = [&uf](VertexId x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };

  std::vector<std::vector<std::pair<VertexId, double>>> adj(inst.size());
  std::size_t taken = 0;
  for (const auto& e : candidates) {
    if (taken + 1 == verts.size()) break;
    const VertexId ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    uf[ra] = rb;
    adj[e.a].emplace_back(e.b, e.w);
    adj[e.b].emplace_back(e.a, e.w);
    ++taken;
  }

  RootedTree tree(inst.size(), kDepot);
  std::vector<VertexId> stack{kDepot};
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : adj[u]) {
      if (v == kDepot || tree.contains(v)) continue;
      tree.attach(v, u, w);
      stack.push_back(v);
    }
  }
  tree.finalize();
  return tree;
}

std::optional<VertexId> deepest_heavy_vertex(const RootedTree& tree, double threshold) {
  std::optional<VertexId> best;
  for (VertexId v : tree.vertices()) {
    if (!(tree.inner_weight(v) > threshold)) continue;
    if (!best || tree.depth(v) > tree.depth(*best)) best = v;
  }
  return best;
}

PeeledBundle peel_bundle(RootedTree& tree, VertexId v, double stop_threshold) {
  if (!tree.contains(v) || tree.children(v).empty()) {
    throw std::invalid_argument("peel_bundle: vertex " + std::to_string(v) +
                                " is not a live vertex with children");
  }
  auto chunk_weight = [&tree](VertexId c) { return tree.inner_weight(c) + tree.edge_weight(c); };

  std::vector<VertexId> chosen;
  const auto kids = tree.children(v);
  const auto heavy = std::find_if(kids.begin(), kids.end(), [&](VertexId c) {
    return chunk_weight(c) > stop_threshold;
  });
  double weight = 0.0;
  if (heavy != kids.end()) {
    chosen.push_back(*heavy);
    weight = chunk_weight(*heavy);
  } else {
    for (VertexId c : kids) {
      chosen.push_back(c);
      weight += chunk_weight(c);
      if (weight > stop_threshold) break;
    }
  }

  PeeledBundle bundle;
  bundle.anchor = v;
  bundle.weight = weight;
  bundle.euler_order.push_back(v);
  for (VertexId c : chosen) {
    for (VertexId u : tree.euler_order(c)) {
      bundle.euler_order.push_back(u);
      bundle.vertices.push_back(u);
      bundle.edges.emplace_back(tree.parent_[u], u);
    }
  }
  std::sort(bundle.vertices.begin(), bundle.vertices.end());

  for (VertexId u : bundle.vertices) tree.live_[u] = false;
  auto& kids_of_v = tree.children_[v];
  kids_of_v.erase(std::remove_if(kids_of_v.begin(), kids_of_v.end(),
                                 [&tree](VertexId c) { return !tree.live_[c]; }),
                  kids_of_v.end());
  for (VertexId u = v; u != RootedTree::kNone; u = tree.parent_[u]) tree.inner_[u] -= weight;
  tree.total_ -= weight;
  return bundle;
}

Tour double_shortcut(const MetricInstance& inst, std::span<const VertexId> euler_order,
                     const std::vector<bool>& covered) {
  std::vector<bool> seen(inst.size(), false);
  std::vector<VertexId> seq;
  for (VertexId v : euler_order) {
    if (seen[v] || (v < covered.size() && covered[v])) continue;
    seen[v] = true;
    seq.push_back(v);
  }
  if (seq.size() > 1) seq.push_back(seq.front());
  return make_tour(inst, std::move(seq));
}

Path tour_to_path(const MetricInstance& inst, const Tour& tour) {
  const auto& s = tour.seq;
  if (s.size() <= 2) {
    Path degenerate;
    if (!s.empty()) degenerate.seq.push_back(s.front());
    return degenerate;
  }
  // Edge i joins s[i] and s[i + 1]; s.back() == s.front().
  const std::size_t m = s.size() - 1;
  std::size_t cut = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (inst.distance(s[i], s[i + 1]) >= inst.distance(s[cut], s[cut + 1])) cut = i;
  }
  Path path;
  for (std::size_t k = 0; k < m; ++k) path.seq.push_back(s[(cut + 1 + k) % m]);
  path.length = walk_length(inst, path.seq);
  return path;
}

std::vector<Tour> split_tour_by_distance(const Tour& tour, const MetricInstance& inst,
                                         double budget) {
  std::vector<VertexId> customers;
  for (VertexId v : tour.seq) {
    if (v != kDepot) customers.push_back(v);
  }
  std::vector<Tour> out;
  if (customers.empty()) return out;

  VertexId farthest = customers.front();
  for (VertexId v : customers) {
    if (inst.distance(kDepot, v) > inst.distance(kDepot, farthest)) farthest = v;
  }
  const double delta = inst.distance(kDepot, farthest);
  if (budget < 2.0 * delta - kLengthTolerance) {
    throw InfeasibleError("vertex " + std::to_string(farthest) +
                              " cannot be served within distance budget " + std::to_string(budget),
                          farthest);
  }
  const double allowance = std::max(0.0, budget - 2.0 * delta);

  auto emit = [&](std::vector<VertexId>& segment) {
    std::vector<VertexId> seq{kDepot};
    seq.insert(seq.end(), segment.begin(), segment.end());
    seq.push_back(kDepot);
    out.push_back(make_tour(inst, std::move(seq)));
    segment.clear();
  };

  std::vector<VertexId> segment{customers.front()};
  double internal = 0.0;
  for (std::size_t i = 1; i < customers.size(); ++i) {
    const double hop = inst.distance(customers[i - 1], customers[i]);
    if (internal + hop > allowance) {
      emit(segment);
      internal = 0.0;
    } else {
      internal += hop;
    }
    segment.push_back(customers[i]);
  }
  emit(segment);
  return out;
}

}  // namespace cdvrp
