#ifndef CDVRP_BINPACK_HPP
#define CDVRP_BINPACK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cdvrp/metric.hpp"

namespace cdvrp {

struct Item {
  VertexId vertex = 0;
  double size = 0.0;
};

struct BinClass {
  double capacity = 0.0;
  std::size_t class_id = 0;
};

struct Bin {
  std::size_t class_id = 0;
  double capacity = 0.0;
  std::vector<Item> items;

  double load() const;
};

struct Packing {
  std::vector<Bin> bins;
  // Sum of the capacities of the opened bins.
  double total_size = 0.0;
};

struct BinGroup {
  std::size_t class_id = 0;
  std::vector<VertexId> vertices;  // ascending
};

// One bin class per fleet class, class_id = index in the fleet.
std::vector<BinClass> bin_classes(const FleetSpec& fleet);

// One item per customer of the instance.
std::vector<Item> customer_items(const MetricInstance& inst);

// Best-fit decreasing for variable bin sizes followed by a consolidation
// pass. Items go largest first (ties by vertex id) into the open bin with the
// least residual room that still fits them (ties by class id, then bin
// index); when none fits, a bin of the smallest class that holds the item is
// opened. Afterwards pairs of bins are merged into one bin of the smallest
// sufficient class while that lowers total_size, best saving first.
// Throws InfeasibleError naming the first item no class can hold.
Packing pack_variable_bins(std::span<const Item> items, std::span<const BinClass> classes);

// One group per opened bin, in bin order.
std::vector<BinGroup> packing_groups(const Packing& packing);

}  // namespace cdvrp

#endif  // CDVRP_BINPACK_HPP
