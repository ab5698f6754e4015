#ifndef CDVRP_IO_HPP
#define CDVRP_IO_HPP

#include <string>
#include <string_view>

#include "cdvrp/metric.hpp"
#include "cdvrp/solvers.hpp"

namespace cdvrp {

// Instance text format, one keyword per section:
//
//   NAME unit-square
//   SIZE 4
//   FLEET
//   0 3 6 inf          # class-id capacity distance-bound [multiplicity|inf]
//   DEMANDS
//   0 1 1 1
//   COORDS             # or MATRIX: strict lower triangle, row i holds i entries
//   0 0
//   1 0
//   ...
//
// '#' starts a comment. Values may follow a keyword on its own line.
//
// Parses and validates; every failure is a ParseError with line and column.
MetricInstance parse_instance(std::string_view text);

// Same, but stops after the structural checks (used by `validate`).
MetricInstance parse_instance_unchecked(std::string_view text);

// COORDS when the instance carries coordinates, MATRIX otherwise. Numbers
// use the shortest representation that reads back to the same double.
std::string write_instance(const MetricInstance& inst);

// JSON with fields algorithm, parameters, tours, pi, alpha, meta in that
// order. Lengths and loads are recomputed from `inst`; reals are rounded to
// 12 significant digits.
std::string write_solution(const RoutingSolution& sol, const MetricInstance& inst);

// Throws ParseError on malformed JSON or missing fields.
RoutingSolution parse_solution(std::string_view text);

}  // namespace cdvrp

#endif  // CDVRP_IO_HPP
