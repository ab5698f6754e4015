#include "cdvrp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cdvrp/errors.hpp"

namespace cdvrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxTspVertices = 10;

using Mask = std::uint32_t;

class Budget {
 public:
  explicit Budget(const OracleLimits& limits)
      : limits_(limits), start_(std::chrono::steady_clock::now()) {}

  void spend(std::size_t states) {
    used_ += states;
    if (used_ > limits_.max_states) {
      throw ResourceLimitError("oracle exceeded " + std::to_string(limits_.max_states) +
                               " search states");
    }
    if ((++checks_ & 0xFFF) == 0 && std::chrono::steady_clock::now() - start_ > limits_.time_cap) {
      throw ResourceLimitError("oracle exceeded its time cap");
    }
  }

 private:
  const OracleLimits& limits_;
  std::chrono::steady_clock::time_point start_;
  std::size_t used_ = 0;
  std::size_t checks_ = 0;
};

// Minimum number of blocks partitioning `full`, where block_ok(B) says
// whether B may form a block. Returns the chosen blocks (empty optional when
// no partition exists). The lowest remaining element always opens the next
// block, so every partition is enumerated once.
template <typename BlockOk, typename BlockCost>
std::optional<std::vector<Mask>> best_partition(Mask full, BlockOk block_ok, BlockCost block_cost,
                                                Budget& budget) {
  std::vector<double> f(std::size_t{full} + 1, kInf);
  std::vector<Mask> choice(std::size_t{full} + 1, 0);
  f[0] = 0.0;
  for (Mask s = 1; s <= full; ++s) {
    if ((s & full) != s) continue;
    const Mask low = s & (~s + 1);
    const Mask rest = s ^ low;
    // Enumerate every subset of `rest`, each joined with `low`.
    for (Mask sub = rest;; sub = (sub - 1) & rest) {
      const Mask block = sub | low;
      budget.spend(1);
      if (block_ok(block) && f[s ^ block] != kInf) {
        const double cand = f[s ^ block] + block_cost(block);
        if (cand < f[s]) {
          f[s] = cand;
          choice[s] = block;
        }
      }
      if (sub == 0) break;
    }
  }
  if (f[full] == kInf) return std::nullopt;
  std::vector<Mask> blocks;
  for (Mask s = full; s != 0; s ^= choice[s]) blocks.push_back(choice[s]);
  return blocks;
}

}  // namespace

std::string_view to_string(VerifyKind kind) {
  switch (kind) {
    case VerifyKind::kCoverage: return "coverage";
    case VerifyKind::kDuplicate: return "duplicate";
    case VerifyKind::kCapacity: return "capacity";
    case VerifyKind::kDistance: return "distance";
    case VerifyKind::kBalance: return "balance";
    case VerifyKind::kEndpoint: return "endpoint";
  }
  return "unknown";
}

std::string describe(const VerifyViolation& violation) {
  std::ostringstream out;
  out << to_string(violation.kind);
  if (violation.tour) out << " in tour " << *violation.tour;
  if (violation.vertex) out << " at vertex " << *violation.vertex;
  out << ", magnitude " << violation.magnitude;
  return out.str();
}

VerifyReport verify_solution(const MetricInstance& inst, const RoutingSolution& sol,
                             std::optional<double> alpha_target) {
  VerifyReport report;
  auto& out = report.violations;
  const std::size_t n = inst.size();
  std::vector<std::size_t> visits(n, 0);
  std::vector<double> lengths;

  for (std::size_t i = 0; i < sol.tours.size(); ++i) {
    const auto& assigned = sol.tours[i];
    if (assigned.class_id >= inst.fleet().size()) {
      throw std::out_of_range("tour " + std::to_string(i) + " uses unknown class " +
                              std::to_string(assigned.class_id));
    }
    const auto& seq = assigned.tour.seq;
    for (VertexId v : seq) {
      if (v >= n) {
        throw std::out_of_range("tour " + std::to_string(i) + " visits unknown vertex " +
                                std::to_string(v));
      }
    }
    const VehicleClass& cls = inst.fleet()[assigned.class_id];

    if (seq.size() < 3 || seq.front() != kDepot || seq.back() != kDepot) {
      out.push_back({i, VerifyKind::kEndpoint, 1.0, std::nullopt});
    }
    double load = 0.0;
    std::vector<VertexId> here;
    for (std::size_t p = 1; p + 1 < seq.size(); ++p) {
      const VertexId v = seq[p];
      if (v == kDepot) {
        out.push_back({i, VerifyKind::kEndpoint, 1.0, kDepot});
        continue;
      }
      if (++visits[v] > 1) out.push_back({i, VerifyKind::kDuplicate, 1.0, v});
      if (std::find(here.begin(), here.end(), v) == here.end()) {
        here.push_back(v);
        load += inst.demand(v);
      }
    }
    double length = 0.0;
    for (std::size_t p = 1; p < seq.size(); ++p) length += inst.distance(seq[p - 1], seq[p]);
    lengths.push_back(length);

    if (length > cls.distance_bound + kLengthTolerance) {
      out.push_back({i, VerifyKind::kDistance, length - cls.distance_bound, std::nullopt});
    }
    if (load > cls.capacity + kLoadTolerance) {
      out.push_back({i, VerifyKind::kCapacity, load - cls.capacity, std::nullopt});
    }
  }

  for (VertexId v = 1; v < n; ++v) {
    if (visits[v] == 0) out.push_back({std::nullopt, VerifyKind::kCoverage, 1.0, v});
  }

  if (alpha_target) {
    double ratio = 1.0;
    if (lengths.size() > 1) {
      const auto [lo, hi] = std::minmax_element(lengths.begin(), lengths.end());
      if (*hi > 0.0) ratio = *lo / *hi;
    }
    if (ratio < *alpha_target) {
      out.push_back({std::nullopt, VerifyKind::kBalance, *alpha_target - ratio, std::nullopt});
    }
  }
  return report;
}

std::optional<RoutingSolution> exact_min_tours(const MetricInstance& inst,
                                               const OracleLimits& limits) {
  const std::size_t n = inst.size();
  if (n > limits.max_n) {
    throw ResourceLimitError("exact_min_tours: " + std::to_string(n) +
                             " vertices exceeds the cap of " + std::to_string(limits.max_n));
  }
  if (n > 25) throw ResourceLimitError("exact_min_tours: too many vertices for subset search");

  RoutingSolution sol;
  sol.algorithm = "exact";
  const std::size_t m = n - 1;
  if (m == 0) {
    normalize_solution(sol);
    return sol;
  }
  Budget budget(limits);
  const Mask full = static_cast<Mask>((Mask{1} << m) - 1);
  const std::size_t masks = std::size_t{full} + 1;
  budget.spend(masks * m);
  auto vertex = [](std::size_t j) { return static_cast<VertexId>(j + 1); };

  // Held-Karp: path[s][j] = shortest depot-start path covering s, ending at j.
  std::vector<double> path(masks * m, kInf);
  std::vector<std::uint8_t> prev(masks * m, 0xFF);
  for (std::size_t j = 0; j < m; ++j) path[(Mask{1} << j) * m + j] = inst.distance(kDepot, vertex(j));
  for (Mask s = 1; s <= full; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      const double here = path[s * m + j];
      if (here == kInf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (s & (Mask{1} << k)) continue;
        const Mask t = s | (Mask{1} << k);
        const double cand = here + inst.distance(vertex(j), vertex(k));
        if (cand < path[t * m + k]) {
          path[t * m + k] = cand;
          prev[t * m + k] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }
  std::vector<double> round_trip(masks, kInf);
  std::vector<std::uint8_t> last(masks, 0);
  std::vector<double> load(masks, 0.0);
  for (Mask s = 1; s <= full; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(s & (Mask{1} << j))) continue;
      const double cand = path[s * m + j] + inst.distance(vertex(j), kDepot);
      if (cand < round_trip[s]) {
        round_trip[s] = cand;
        last[s] = static_cast<std::uint8_t>(j);
      }
    }
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(s));
    load[s] = load[s & (s - 1)] + inst.demand(vertex(low));
  }

  const FleetSpec& fleet = inst.fleet();
  auto block_class = [&](Mask b) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < fleet.size(); ++c) {
      if (load[b] <= fleet[c].capacity + kLoadTolerance &&
          round_trip[b] <= fleet[c].distance_bound + kLengthTolerance) {
        return c;
      }
    }
    return std::nullopt;
  };

  const auto blocks = best_partition(
      full, [&](Mask b) { return block_class(b).has_value(); }, [](Mask) { return 1.0; }, budget);
  if (!blocks) return std::nullopt;

  for (Mask b : *blocks) {
    std::vector<VertexId> rev;
    Mask s = b;
    std::size_t j = last[b];
    while (true) {
      rev.push_back(vertex(j));
      const std::uint8_t p = prev[s * m + j];
      s ^= Mask{1} << j;
      if (s == 0) break;
      j = p;
    }
    std::vector<VertexId> seq{kDepot};
    seq.insert(seq.end(), rev.rbegin(), rev.rend());
    seq.push_back(kDepot);
    sol.tours.push_back({make_tour(inst, std::move(seq)), *block_class(b)});
  }
  normalize_solution(sol);
  return sol;
}

Packing exact_pack(std::span<const Item> items, std::span<const BinClass> classes,
                   const OracleLimits& limits) {
  if (items.size() > limits.max_items) {
    throw ResourceLimitError("exact_pack: " + std::to_string(items.size()) +
                             " items exceeds the cap of " + std::to_string(limits.max_items));
  }
  if (items.size() > 20) throw ResourceLimitError("exact_pack: too many items for subset search");

  const std::size_t m = items.size();
  const Mask full = static_cast<Mask>((Mask{1} << m) - 1);
  std::vector<double> size(std::size_t{full} + 1, 0.0);
  for (Mask s = 1; s <= full; ++s) {
    size[s] = size[s & (s - 1)] + items[static_cast<std::size_t>(std::countr_zero(s))].size;
  }
  auto cheapest = [&](double load) -> std::optional<BinClass> {
    std::optional<BinClass> best;
    for (const auto& c : classes) {
      if (!(c.capacity > 0.0) || load > c.capacity + kLoadTolerance) continue;
      if (!best || c.capacity < best->capacity ||
          (c.capacity == best->capacity && c.class_id < best->class_id)) {
        best = c;
      }
    }
    return best;
  };
  for (const auto& item : items) {
    if (!cheapest(item.size)) {
      throw InfeasibleError("item for vertex " + std::to_string(item.vertex) +
                                " exceeds every bin capacity",
                            item.vertex);
    }
  }

  Budget budget(limits);
  const auto blocks = best_partition(
      full, [&](Mask b) { return cheapest(size[b]).has_value(); },
      [&](Mask b) { return cheapest(size[b])->capacity; }, budget);

  Packing packing;
  if (!blocks) return packing;
  for (Mask b : *blocks) {
    const BinClass cls = *cheapest(size[b]);
    Bin bin{cls.class_id, cls.capacity, {}};
    for (std::size_t i = 0; i < m; ++i) {
      if (b & (Mask{1} << i)) bin.items.push_back(items[i]);
    }
    packing.total_size += bin.capacity;
    packing.bins.push_back(std::move(bin));
  }
  return packing;
}

Tour exact_tsp(const MetricInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kMaxTspVertices) {
    throw ResourceLimitError("exact_tsp: " + std::to_string(n) + " vertices exceeds the cap of " +
                             std::to_string(kMaxTspVertices));
  }
  if (n == 1) return make_tour(inst, {kDepot});

  std::vector<VertexId> order(n - 1);
  std::iota(order.begin(), order.end(), VertexId{1});
  std::vector<VertexId> best_order;
  double best = kInf;
  do {
    double len = inst.distance(kDepot, order.front()) + inst.distance(order.back(), kDepot);
    for (std::size_t i = 1; i < order.size(); ++i) len += inst.distance(order[i - 1], order[i]);
    // Near-equal lengths keep the lexicographically earlier order.
    if (len < best - 1e-12) {
      best = len;
      best_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  std::vector<VertexId> seq{kDepot};
  seq.insert(seq.end(), best_order.begin(), best_order.end());
  seq.push_back(kDepot);
  return make_tour(inst, std::move(seq));
}

}  // namespace cdvrp
