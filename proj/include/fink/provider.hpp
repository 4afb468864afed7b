#pragma once

// Answers "how wide must the ground set be" queries for the extractors,
// either from the bound formulas, from the exhaustive oracles, or not at all
// (adaptive mode, where every existential step is settled by direct search).

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fink/search.hpp"

namespace fink {

struct WidthAnswer {
  /// nullopt: no usable number (overflow, budget, no oracle, adaptive mode).
  std::optional<std::size_t> value;
  /// Formula or oracle call the value came from, e.g. "f[4](6*m-3) at m=2".
  std::string plan;
};

class NumberProvider {
 public:
  enum class Mode { PaperBound, ExactSearch, Adaptive };

  static NumberProvider paper(std::size_t digit_budget = 100000);
  static NumberProvider exact(SearchOptions opts = {});
  static NumberProvider adaptive(SearchOptions opts = {});
  /// "paper", "paper:<digits>", "exact", "exact:<nodes>", "adaptive".
  static NumberProvider parse(std::string_view text);

  Mode mode() const { return mode_; }
  std::string describe() const;
  const SearchOptions& search_options() const { return opts_; }
  std::size_t digit_budget() const { return digits_; }

  /// Least n with every r-coloring of the i-subsets of n homogeneous on some m-set.
  WidthAnswer ramsey(std::size_t i, std::size_t m, int r) const;
  WidthAnswer vdw(std::size_t m, int r) const;
  WidthAnswer min_determined(std::size_t m, int r) const;
  WidthAnswer g(int k, std::size_t d, std::size_t m, int r) const;
  /// Width at which every r-coloring of FIN_k admits N blocks h_i whose span
  /// is colored by supp_top alone.
  WidthAnswer bar_n(int k, std::size_t N, int r) const;

 private:
  NumberProvider(Mode mode, SearchOptions opts, std::size_t digits);
  WidthAnswer cached(const std::string& key, const std::function<WidthAnswer()>& compute) const;
  WidthAnswer from_formula(const std::string& name, const std::map<std::string, long>& params, int r) const;

  Mode mode_;
  SearchOptions opts_;
  std::size_t digits_;
  std::shared_ptr<std::map<std::string, WidthAnswer>> cache_;
};

}  // namespace fink
