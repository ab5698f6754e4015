#include "cdvrp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cdvrp/binpack.hpp"
#include "cdvrp/errors.hpp"
#include "cdvrp/oracle.hpp"

namespace cdvrp {

namespace {

VertexId first_customer(const Tour& t) {
  for (VertexId v : t.seq) {
    if (v != kDepot) return v;
  }
  return kDepot;
}

// Relabels a tour of a sub-instance with the parent's vertex ids.
Tour lift_tour(const MetricInstance& parent, const Tour& t, std::span<const VertexId> original) {
  std::vector<VertexId> seq;
  seq.reserve(t.seq.size());
  for (VertexId v : t.seq) seq.push_back(original[v]);
  return make_tour(parent, std::move(seq));
}

// Depot round trip through the path's customers, in path order.
std::optional<Tour> close_path(const MetricInstance& inst, const Path& path) {
  std::vector<VertexId> seq{kDepot};
  for (VertexId v : path.seq) {
    if (v != kDepot) seq.push_back(v);
  }
  if (seq.size() == 1) return std::nullopt;
  seq.push_back(kDepot);
  return make_tour(inst, std::move(seq));
}

std::vector<Tour> close_paths(const MetricInstance& inst, const BalancedPaths& balanced) {
  std::vector<Tour> tours;
  for (const auto& p : balanced.paths) {
    if (auto t = close_path(inst, p)) tours.push_back(std::move(*t));
  }
  return tours;
}

void pad_paths(const MetricInstance& inst, BalancedPaths& out) {
  const double lambda = out.lambda;
  for (std::size_t i = 0; i < out.paths.size(); ++i) {
    const Path& p = out.paths[i];
    if (p.length >= lambda / 2.0 || p.seq.size() < 2) continue;
    const double closed = p.length + inst.distance(p.seq.back(), p.seq.front());
    if (!(closed > 0.0)) continue;
    std::size_t reps = 1;
    while (static_cast<double>(reps) * closed < lambda / 2.0) reps *= 2;
    const double padded = static_cast<double>(reps) * closed;
    if (padded <= lambda) {
      out.repetitions[i] = reps;
      out.effective_lengths[i] = padded;
    }
  }
}

}  // namespace

void normalize_solution(RoutingSolution& sol) {
  std::stable_sort(sol.tours.begin(), sol.tours.end(),
                   [](const AssignedTour& a, const AssignedTour& b) {
                     return first_customer(a.tour) < first_customer(b.tour);
                   });
  sol.pi = sol.tours.size();
  sol.alpha = 1.0;
  if (sol.tours.size() > 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& t : sol.tours) {
      lo = std::min(lo, t.tour.length);
      hi = std::max(hi, t.tour.length);
    }
    if (hi > 0.0) sol.alpha = lo / hi;
  }
}

double balance_ratio(std::span<const double> lengths) {
  if (lengths.empty()) throw std::invalid_argument("balance_ratio: no lengths");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double l : lengths) {
    if (!(l > 0.0)) throw std::invalid_argument("balance_ratio: lengths must be positive");
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  return lo / hi;
}

std::vector<Tour> solve_dvrp(const MetricInstance& inst, double distance_bound) {
  const VertexId far = inst.farthest_vertex();
  if (inst.depot_radius() > distance_bound / 2.0 + kLengthTolerance) {
    throw InfeasibleError("vertex " + std::to_string(far) + " lies farther than T/2 = " +
                              std::to_string(distance_bound / 2.0) + " from the depot",
                          far);
  }
  if (inst.size() == 1) return {};
  std::vector<VertexId> all(inst.size());
  std::iota(all.begin(), all.end(), VertexId{0});
  const RootedTree tree = minimum_spanning_tree(inst, all);
  const Tour tour = double_shortcut(inst, tree.euler_order(tree.root()));
  return split_tour_by_distance(tour, inst, distance_bound);
}

RoutingSolution solve_min_nt(const MetricInstance& inst) {
  require_valid(inst);
  const auto items = customer_items(inst);
  const auto classes = bin_classes(inst.fleet());
  const Packing packing = pack_variable_bins(items, classes);

  RoutingSolution sol;
  sol.algorithm = "min-nt";
  for (const auto& group : packing_groups(packing)) {
    std::vector<VertexId> subset{kDepot};
    subset.insert(subset.end(), group.vertices.begin(), group.vertices.end());
    const SubInstance sub = induced_subinstance(inst, subset);
    const double bound = inst.fleet()[group.class_id].distance_bound;
    for (const Tour& t : solve_dvrp(sub.instance, bound)) {
      sol.tours.push_back({lift_tour(inst, t, sub.original), group.class_id});
    }
  }
  normalize_solution(sol);
  sol.meta["bins"] = static_cast<std::int64_t>(packing.bins.size());
  sol.meta["packing_total_size"] = packing.total_size;
  return sol;
}

BalancedPaths solve_min_nht(const MetricInstance& inst, double lambda, bool pad) {
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_min_nht: lambda must be positive");

  std::vector<VertexId> all(inst.size());
  std::iota(all.begin(), all.end(), VertexId{0});
  RootedTree tree = minimum_spanning_tree(inst, all);

  BalancedPaths out;
  out.lambda = lambda;
  out.max_tree_edge = tree.max_edge_weight();
  out.length_guarantee = out.max_tree_edge <= lambda / 4.0;
  out.length_bound = out.length_guarantee ? lambda : lambda + 2.0 * out.max_tree_edge;

  std::vector<bool> covered(inst.size(), false);
  auto residual_path = [&] {
    return tour_to_path(inst, double_shortcut(inst, tree.euler_order(tree.root()), covered));
  };
  auto emit = [&](Path p) {
    if (p.seq.empty()) return;
    for (VertexId v : p.seq) covered[v] = true;
    out.paths.push_back(std::move(p));
  };

  // A peel always removes more than lambda / 4 of tree weight, and a
  // residual path longer than lambda needs a tree heavier than lambda / 2,
  // so the root itself qualifies as a peel vertex and the loop ends.
  Path residual = residual_path();
  while (tree.total_weight() > lambda || residual.length > lambda) {
    const auto v = deepest_heavy_vertex(tree, lambda / 4.0);
    if (!v) break;
    const PeeledBundle bundle = peel_bundle(tree, *v, lambda / 4.0);
    emit(tour_to_path(inst, double_shortcut(inst, bundle.euler_order, covered)));
    ++out.peel_count;
    residual = residual_path();
  }
  emit(std::move(residual));

  out.k = out.paths.size();
  out.repetitions.assign(out.k, 0);
  for (const auto& p : out.paths) out.effective_lengths.push_back(p.length);
  if (pad) pad_paths(inst, out);

  if (out.k > 0) {
    const auto [lo, hi] =
        std::minmax_element(out.effective_lengths.begin(), out.effective_lengths.end());
    out.min_len = *lo;
    out.max_len = *hi;
    out.alpha = out.max_len > 0.0 ? out.min_len / out.max_len : 1.0;
  }
  return out;
}

RoutingSolution solve_bdcvrp(const MetricInstance& inst, double alpha_target) {
  if (!(alpha_target > 0.0 && alpha_target < 1.0)) {
    throw std::invalid_argument("solve_bdcvrp: alpha_target must lie in (0, 1)");
  }
  require_valid(inst);
  const Packing packing = pack_variable_bins(customer_items(inst), bin_classes(inst.fleet()));

  RoutingSolution sol;
  sol.algorithm = "bdcvrp";
  sol.parameters["alpha_target"] = alpha_target;
  std::int64_t retries = 0, fallback_splits = 0, padded_paths = 0;

  for (const auto& group : packing_groups(packing)) {
    std::vector<VertexId> subset{kDepot};
    subset.insert(subset.end(), group.vertices.begin(), group.vertices.end());
    const SubInstance sub = induced_subinstance(inst, subset);
    const MetricInstance& local = sub.instance;
    const double bound = inst.fleet()[group.class_id].distance_bound;

    auto run = [&](double lambda) {
      const BalancedPaths balanced = solve_min_nht(local, lambda, true);
      for (std::size_t r : balanced.repetitions) padded_paths += r > 0;
      return close_paths(local, balanced);
    };
    auto too_long = [bound](const Tour& t) { return t.length > bound + kLengthTolerance; };

    std::vector<Tour> tours = run(bound);
    if (std::any_of(tours.begin(), tours.end(), too_long)) {
      ++retries;
      const double tighter = bound - 2.0 * local.depot_radius();
      if (tighter > 0.0) tours = run(tighter);
    }
    std::vector<Tour> fitted;
    for (Tour& t : tours) {
      if (!too_long(t)) {
        fitted.push_back(std::move(t));
        continue;
      }
      ++fallback_splits;
      for (Tour& piece : split_tour_by_distance(t, local, bound)) fitted.push_back(std::move(piece));
    }
    for (const Tour& t : fitted) {
      sol.tours.push_back({lift_tour(inst, t, sub.original), group.class_id});
    }
  }

  normalize_solution(sol);
  sol.meta["composed"] = true;
  sol.meta["balanced"] = sol.alpha >= alpha_target;
  sol.meta["bins"] = static_cast<std::int64_t>(packing.bins.size());
  sol.meta["retries"] = retries;
  sol.meta["fallback_splits"] = fallback_splits;
  sol.meta["padded_paths"] = padded_paths;
  return sol;
}

RoutingSolution solve_min_nht_routes(const MetricInstance& inst, double lambda) {
  require_valid(inst);
  const FleetSpec& fleet = inst.fleet();
  const double q_max = fleet.max_capacity();
  for (VertexId v = 1; v < inst.size(); ++v) {
    if (inst.demand(v) > q_max + kLoadTolerance) {
      throw InfeasibleError("demand of vertex " + std::to_string(v) + " exceeds every capacity", v);
    }
  }

  const BalancedPaths balanced = solve_min_nht(inst, lambda, false);
  RoutingSolution sol;
  sol.algorithm = "min-nht";
  sol.parameters["lambda"] = lambda;

  std::int64_t splits = 0;
  auto assign = [&](const Tour& piece) {
    std::optional<std::size_t> exact, roomiest;
    for (std::size_t c = 0; c < fleet.size(); ++c) {
      if (piece.load > fleet[c].capacity + kLoadTolerance) continue;
      if (!exact && piece.length <= fleet[c].distance_bound + kLengthTolerance) exact = c;
      if (!roomiest || fleet[c].distance_bound > fleet[*roomiest].distance_bound) roomiest = c;
    }
    if (exact) {
      sol.tours.push_back({piece, *exact});
      return;
    }
    ++splits;
    for (Tour& t : split_tour_by_distance(piece, inst, fleet[*roomiest].distance_bound)) {
      sol.tours.push_back({std::move(t), *roomiest});
    }
  };

  for (const auto& path : balanced.paths) {
    const auto closed = close_path(inst, path);
    if (!closed) continue;
    std::vector<VertexId> piece;
    double load = 0.0;
    for (std::size_t i = 1; i + 1 < closed->seq.size(); ++i) {
      const VertexId v = closed->seq[i];
      if (!piece.empty() && load + inst.demand(v) > q_max + kLoadTolerance) {
        piece.insert(piece.begin(), kDepot);
        piece.push_back(kDepot);
        assign(make_tour(inst, std::move(piece)));
        piece.clear();
        load = 0.0;
        ++splits;
      }
      piece.push_back(v);
      load += inst.demand(v);
    }
    piece.insert(piece.begin(), kDepot);
    piece.push_back(kDepot);
    assign(make_tour(inst, std::move(piece)));
  }

  normalize_solution(sol);
  sol.meta["paths"] = static_cast<std::int64_t>(balanced.k);
  sol.meta["path_alpha"] = balanced.alpha;
  sol.meta["peels"] = static_cast<std::int64_t>(balanced.peel_count);
  sol.meta["length_guarantee"] = balanced.length_guarantee;
  sol.meta["fleet_splits"] = splits;
  return sol;
}

GadgetInstance reduce_dcvrp_to_bdcvrp(const MetricInstance& inst, const RoutingSolution& sol,
                                      double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("reduce_dcvrp_to_bdcvrp: alpha must lie in (0, 1)");
  }
  const VerifyReport check = verify_solution(inst, sol);
  if (!check.ok()) {
    throw InfeasibleError("solution is not feasible on the instance: " +
                          describe(check.violations.front()));
  }

  const std::size_t n = inst.size();
  const double delta = inst.depot_radius();
  std::vector<double> lengths;
  double max_length = 0.0;
  for (const auto& t : sol.tours) {
    lengths.push_back(walk_length(inst, t.tour.seq));
    max_length = std::max(max_length, lengths.back());
  }

  std::vector<PaddingChain> chains;
  std::size_t next_id = n;
  for (std::size_t i = 0; i < sol.tours.size(); ++i) {
    const double deficit = max_length - lengths[i];
    if (deficit < 1e-12 || !(delta > 0.0)) continue;
    const auto& seq = sol.tours[i].tour.seq;
    PaddingChain chain;
    chain.tour_index = i;
    chain.attach = seq[seq.size() - 2];
    chain.deficit = deficit;
    chain.closing = inst.distance(chain.attach, kDepot);

    const double steps = std::floor(deficit / delta);
    const double remainder = deficit - steps * delta;
    chain.segments.assign(static_cast<std::size_t>(steps), delta);
    if (remainder >= 1e-12) chain.segments.push_back(remainder);
    // The attach-depot edge is a chord of the padded cycle; a segment longer
    // than half that cycle would be shortcut by the metric closure.
    const double half_cycle = deficit / 2.0 + chain.closing;
    const bool shortcut = std::any_of(chain.segments.begin(), chain.segments.end(),
                                      [half_cycle](double s) { return s > half_cycle; });
    if (shortcut) chain.segments.assign(2, deficit / 2.0);

    for (std::size_t s = 0; s < chain.segments.size(); ++s) chain.added.push_back(next_id++);
    chains.push_back(std::move(chain));
  }

  if (chains.empty()) {
    RoutingSolution padded = sol;
    normalize_solution(padded);
    padded.algorithm = "gadget";
    return GadgetInstance{inst, inst, {}, std::move(padded), alpha, max_length};
  }

  const std::size_t m = next_id;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(m * m, kInf);
  for (std::size_t i = 0; i < m; ++i) d[i * m + i] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * m + j] = inst.distance(i, j);
  }
  auto link = [&](std::size_t a, std::size_t b, double w) {
    d[a * m + b] = std::min(d[a * m + b], w);
    d[b * m + a] = std::min(d[b * m + a], w);
  };
  for (const auto& chain : chains) {
    VertexId prev = chain.attach;
    for (std::size_t s = 0; s < chain.added.size(); ++s) {
      link(prev, chain.added[s], chain.segments[s]);
      prev = chain.added[s];
    }
    link(prev, kDepot, chain.closing);
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      const double dik = d[i * m + k];
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const double via = dik + d[k * m + j];
        if (via < d[i * m + j]) d[i * m + j] = via;
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = std::min(d[i * m + j], d[j * m + i]);
      d[i * m + j] = d[j * m + i] = v;
    }
  }
  // Chains never shorten base distances; restore the base block exactly.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * m + j] = inst.distance(i, j);
  }

  std::vector<double> demand(inst.demands().begin(), inst.demands().end());
  demand.resize(m, 0.0);
  std::vector<VehicleClass> classes(inst.fleet().classes().begin(), inst.fleet().classes().end());
  for (auto& c : classes) c.distance_bound = std::max(c.distance_bound, max_length);

  MetricInstance gadget(inst.name() + "-gadget", m, std::move(d), std::move(demand),
                        FleetSpec(std::move(classes)));

  RoutingSolution padded;
  padded.algorithm = "gadget";
  padded.parameters["alpha"] = alpha;
  padded.tours = sol.tours;
  for (const auto& chain : chains) {
    auto& t = padded.tours[chain.tour_index];
    std::vector<VertexId> seq(t.tour.seq.begin(), t.tour.seq.end() - 1);
    seq.insert(seq.end(), chain.added.begin(), chain.added.end());
    seq.push_back(kDepot);
    t.tour = make_tour(gadget, std::move(seq));
  }
  for (auto& t : padded.tours) t.tour = make_tour(gadget, t.tour.seq);
  normalize_solution(padded);

  return GadgetInstance{inst, std::move(gadget), std::move(chains), std::move(padded), alpha,
                        max_length};
}

}  // namespace cdvrp
