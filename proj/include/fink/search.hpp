#pragma once

// Exhaustive oracles: witness search for a fixed coloring, exact small
// Ramsey-type numbers, and bad-coloring (lower bound) certificates.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fink/coloring.hpp"
#include "fink/csp.hpp"
#include "fink/element.hpp"

namespace fink {

struct SearchOptions {
  std::uint64_t node_budget = 200'000'000;
  int workers = 1;
  /// Use the OpenMP kernels; false selects the serial reference path.
  bool parallel = true;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  double wall_seconds = 0;
};

struct WitnessReport {
  BlockSequence witness;
  int color = 0;
  bool verified = false;
  std::size_t span_size = 0;
  SearchStats stats;
};

/// Least (by encodings) block sequence of length m in FIN_k(n) whose span, or
/// (span)^[d] for tuple colorings, is monochromatic. nullopt means none exists.
/// Requires m >= d. Throws BudgetExceeded when the node budget runs out.
std::optional<WitnessReport> find_witness(const ColoringSpec& c, std::size_t m, const SearchOptions& opts = {});

/// Colors of the span groups (element with least generator i -> entry i).
using GroupPredicate = std::function<bool(const std::vector<int>&)>;

/// Least block sequence of length m in FIN(n) on whose span the color depends
/// only on the least generator index used, and whose group colors satisfy `accept`.
std::optional<BlockSequence> find_min_determined(const ColoringSpec& c, std::size_t m,
                                                 const SearchOptions& opts = {}, const GroupPredicate& accept = {});

/// Independent evaluators: walk span(seq) through fink::span and re-color.
bool verify_monochromatic(const ColoringSpec& c, const BlockSequence& seq, int* color = nullptr);
bool verify_min_determined(const ColoringSpec& c, const BlockSequence& seq);

struct NumberCertificate {
  std::string quantity;
  nlohmann::json params;
  std::size_t value = 0;
  /// A coloring at width value-1 with no witness (absent when value-1 is 0).
  std::optional<ColoringSpec> lower_witness;
  SearchStats stats;
};

nlohmann::json to_json(const NumberCertificate& cert);

/// g_{k,d}(m,r): least n such that every r-coloring of FIN_k(n)^[d] has a witness of length m.
NumberCertificate exact_g(int k, std::size_t d, std::size_t m, int r, const SearchOptions& opts = {});
/// Least n such that every r-coloring of {0..n-1} has a monochromatic m-term progression.
NumberCertificate exact_vdw(std::size_t m, int r, const SearchOptions& opts = {});
/// Least n such that every r-coloring of the i-subsets of n has a monochromatic m-set.
NumberCertificate exact_ramsey(std::size_t i, std::size_t m, int r, const SearchOptions& opts = {});
/// Least N such that every r-coloring of FIN(N) has a min-determined sequence of length m.
NumberCertificate exact_min_determined(std::size_t m, int r, const SearchOptions& opts = {});

/// A coloring of FIN_k(n)^[d] with no length-m witness, or nullopt when none exists.
std::optional<ColoringSpec> find_bad_coloring(int k, std::size_t n, std::size_t m, int r,
                                              const SearchOptions& opts = {}, std::size_t d = 1);

/// True iff the Ints-domain coloring has a monochromatic m-term progression.
bool has_monochromatic_progression(const ColoringSpec& c, std::size_t m);
/// True iff the Tuples-domain coloring has an m-set with all i-subsets one color.
bool has_monochromatic_clique(const ColoringSpec& c, std::size_t m);

/// The constraint system behind exact_g at width n (variables in `points` order).
AvoidanceProblem witness_problem(int k, std::size_t d, std::size_t n, std::size_t m, int r,
                                 std::vector<std::vector<FinkElement>>& points);
AvoidanceProblem min_determined_problem(std::size_t n, std::size_t m, int r, std::vector<FinkElement>& points);

}  // namespace fink
