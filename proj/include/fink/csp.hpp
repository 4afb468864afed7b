#pragma once

// Hypergraph coloring avoidance: find a coloring of variables 0..V-1 under
// which no constraint is "hit". A constraint is a list of variable groups and
// is hit when every group is monochromatic (groups may differ in color).
//
// All exhaustive Ramsey-type oracles reduce to this: the variables are the
// colored points, each constraint one candidate witness. A coloring avoiding
// every constraint is a bad coloring; none existing proves the upper bound.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fink {

struct Constraint {
  std::vector<std::vector<std::uint32_t>> groups;
};

struct AvoidanceProblem {
  std::size_t variables = 0;
  int colors = 2;
  std::vector<Constraint> constraints;
};

struct AvoidanceResult {
  /// Lexicographically least avoiding coloring under color-relabeling
  /// canonical form, or nullopt when every coloring hits some constraint.
  std::optional<std::vector<int>> coloring;
  std::uint64_t nodes = 0;
};

bool hits(const Constraint& c, std::span<const int> coloring);

/// Depth-first search in canonical order. Throws BudgetExceeded past `node_budget`.
AvoidanceResult avoid_serial(const AvoidanceProblem& p, std::uint64_t node_budget);

/// Same answer as avoid_serial; top-level prefixes are searched by an OpenMP
/// worker pool and the minimal prefix with a solution wins.
AvoidanceResult avoid_parallel(const AvoidanceProblem& p, std::uint64_t node_budget, int workers);

}  // namespace fink
