#include "cdvrp/binpack.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "cdvrp/errors.hpp"

namespace cdvrp {

namespace {

// Smallest-capacity class (ties: smaller id) that holds `load`.
std::optional<BinClass> smallest_fitting(std::span<const BinClass> classes, double load) {
  std::optional<BinClass> best;
  for (const auto& c : classes) {
    if (!(c.capacity > 0.0) || load > c.capacity + kLoadTolerance) continue;
    if (!best || c.capacity < best->capacity ||
        (c.capacity == best->capacity && c.class_id < best->class_id)) {
      best = c;
    }
  }
  return best;
}

void consolidate(std::vector<Bin>& bins, std::span<const BinClass> classes) {
  for (;;) {
    double best_saving = 0.0;
    std::size_t best_i = 0, best_j = 0;
    std::optional<BinClass> best_class;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      for (std::size_t j = i + 1; j < bins.size(); ++j) {
        const auto target = smallest_fitting(classes, bins[i].load() + bins[j].load());
        if (!target) continue;
        const double saving = bins[i].capacity + bins[j].capacity - target->capacity;
        if (saving > best_saving) {
          best_saving = saving;
          best_i = i;
          best_j = j;
          best_class = target;
        }
      }
    }
    if (!best_class) return;
    Bin& keep = bins[best_i];
    keep.class_id = best_class->class_id;
    keep.capacity = best_class->capacity;
    keep.items.insert(keep.items.end(), bins[best_j].items.begin(), bins[best_j].items.end());
    bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(best_j));
  }
}

}  // namespace

double Bin::load() const {
  double total = 0.0;
  for (const auto& item : items) total += item.size;
  return total;
}

std::vector<BinClass> bin_classes(const FleetSpec& fleet) {
  std::vector<BinClass> out;
  for (std::size_t i = 0; i < fleet.size(); ++i) out.push_back({fleet[i].capacity, i});
  return out;
}

std::vector<Item> customer_items(const MetricInstance& inst) {
  std::vector<Item> items;
  for (VertexId v = 1; v < inst.size(); ++v) items.push_back({v, inst.demand(v)});
  return items;
}

Packing pack_variable_bins(std::span<const Item> items, std::span<const BinClass> classes) {
  if (classes.empty()) throw StructuralError("pack_variable_bins: no bin classes");

  std::vector<Item> order(items.begin(), items.end());
  std::stable_sort(order.begin(), order.end(), [](const Item& a, const Item& b) {
    return a.size != b.size ? a.size > b.size : a.vertex < b.vertex;
  });

  std::vector<Bin> bins;
  std::vector<double> used;
  for (const auto& item : order) {
    std::optional<std::size_t> best;
    double best_room = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const double room = bins[b].capacity - used[b];
      if (item.size > room + kLoadTolerance) continue;
      if (room < best_room || (room == best_room && bins[b].class_id < bins[*best].class_id)) {
        best = b;
        best_room = room;
      }
    }
    if (!best) {
      const auto cls = smallest_fitting(classes, item.size);
      if (!cls) {
        throw InfeasibleError("item for vertex " + std::to_string(item.vertex) + " of size " +
                                  std::to_string(item.size) + " exceeds every bin capacity",
                              item.vertex);
      }
      bins.push_back({cls->class_id, cls->capacity, {}});
      used.push_back(0.0);
      best = bins.size() - 1;
    }
    bins[*best].items.push_back(item);
    used[*best] += item.size;
  }

  consolidate(bins, classes);

  Packing packing;
  packing.bins = std::move(bins);
  for (const auto& b : packing.bins) packing.total_size += b.capacity;
  return packing;
}

std::vector<BinGroup> packing_groups(const Packing& packing) {
  std::vector<BinGroup> groups;
  for (const auto& bin : packing.bins) {
    BinGroup g{bin.class_id, {}};
    for (const auto& item : bin.items) g.vertices.push_back(item.vertex);
    std::sort(g.vertices.begin(), g.vertices.end());
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace cdvrp
