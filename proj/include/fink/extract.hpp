#pragma once

// Witness extractors that follow the constructive proofs step by step. Each
// existential width comes from a NumberProvider; every result is re-verified
// on its span before it is returned.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fink/coloring.hpp"
#include "fink/element.hpp"
#include "fink/provider.hpp"

namespace fink {

struct TraceStep {
  std::string name;
  std::map<std::string, std::size_t> widths;
  std::vector<std::string> sequences;  // one "k:n:digits" line list per sequence
  std::vector<int> colors;
  std::string note;
};

struct ExtractionTrace {
  std::vector<TraceStep> steps;
  void add(TraceStep s) { steps.push_back(std::move(s)); }
};

nlohmann::json to_json(const ExtractionTrace& trace);

struct Extraction {
  BlockSequence witness;
  ExtractionTrace trace;
  std::optional<int> color;  // monochromatic extractors only
  bool verified = false;
};

/// Length-m sequence on whose span c depends only on the least generator used.
/// c colors FIN(N) (fink k=1 or subsets).
Extraction min_determined_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider);

/// Length-m sequence with monochromatic span, via min-determined extraction
/// at length r(m-1)+1 and the pigeonhole principle.
Extraction folkman_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider);

/// h = (h_i)_{i<N} in FIN_{k+1} with h_i = f_{3i} + U f_{3i+1} + f_{3i+2}, on whose
/// span the color depends only on supp_top. c colors FIN_{k+1}(n).
Extraction code_extract(const ColoringSpec& c, std::size_t N, const NumberProvider& provider);

/// Monochromatic length-m sequence in FIN_{k+1}: code_extract with N = g_{1,1}(m,r),
/// then Folkman on the pushed-down coloring of FIN(N).
Extraction step_up_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider);

/// Monochromatic length-m sequence for c on FIN_k(N)^[d+1], by the
/// refinement-chain diagonalization down to dimension d.
Extraction raise_dimension_extract(const ColoringSpec& c, std::size_t m, const NumberProvider& provider);

/// All span pairs of h with equal supp_top have equal colors.
bool verify_supp_top_determined(const ColoringSpec& c, const BlockSequence& h);

/// h_i = f_{3i} + U f_{3i+1} + f_{3i+2}.
BlockSequence code_sequence(const BlockSequence& f);

struct RewriteReport {
  std::size_t elements = 0;         // span recipes of h examined
  std::size_t counterexamples = 0;  // recipes with no decomposition
};

/// For every g in <h> (h = code_sequence(f)) with |supp_top(g)| = l, searches
/// (w_j)_{j<2l+1} in <f>^[2l+1] with g = sum_j U^{j mod 2} w_j.
RewriteReport check_u_rewrite(const BlockSequence& f);

/// g in FIN_k(L) carried to sum_i T^{k-g(i)} gens_i.
FinkElement embed(const BlockSequence& gens, const FinkElement& g);

}  // namespace fink
