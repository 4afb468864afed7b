#pragma once

// Combinatorial spaces <f_i>: sums of Tetris images of a block sequence
// with at least one un-Tetrised term.

#include <cstddef>
#include <vector>

#include "fink/element.hpp"

namespace fink {

struct RecipeTerm {
  std::size_t index;  ///< generator index
  int exponent;       ///< Tetris exponent, in [0, k-1]
  bool operator==(const RecipeTerm&) const = default;
};

struct SpanElement {
  FinkElement element;
  std::vector<RecipeTerm> recipe;  ///< increasing indices, min exponent 0
};

/// Indices of generators entering with exponent 0 (supp_k).
std::vector<std::size_t> supp_top(const SpanElement& s);

/// Sum of T^{l_j} f_{i_j}; throws InvalidArgument on a malformed recipe.
FinkElement evaluate_recipe(const BlockSequence& gens, const std::vector<RecipeTerm>& recipe);

class Span {
 public:
  /// Distinct members, sorted.
  const std::vector<FinkElement>& elements() const { return elements_; }
  /// Every recipe, in enumeration order. Several may produce one element.
  const std::vector<SpanElement>& recipes() const { return recipes_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const FinkElement& f) const;

 private:
  friend Span span(const BlockSequence&, std::size_t);
  std::vector<FinkElement> elements_;
  std::vector<SpanElement> recipes_;
};

/// Number of recipes for m generators at level k: sum_j C(m,j) (k^j - (k-1)^j).
std::size_t recipe_count(std::size_t m, int k);

/// Throws BudgetExceeded when the recipe count exceeds `budget`.
Span span(const BlockSequence& gens, std::size_t budget = 1u << 20);

/// True iff `candidate` is block-ordered and each of its elements lies in span(gens).
bool is_block_subsequence(const BlockSequence& candidate, const BlockSequence& gens);

/// All d-element block sequences drawn from `members` (which must be sorted),
/// i.e. (<f_i>)^[d] when `members` is a span.
std::vector<std::vector<FinkElement>> block_tuples(const std::vector<FinkElement>& members, std::size_t d);

}  // namespace fink
