#include "fink/span.hpp"

#include <algorithm>

#include "fink/errors.hpp"

namespace fink {

std::vector<std::size_t> supp_top(const SpanElement& s) {
  std::vector<std::size_t> out;
  for (const auto& t : s.recipe)
    if (t.exponent == 0) out.push_back(t.index);
  return out;
}

FinkElement evaluate_recipe(const BlockSequence& gens, const std::vector<RecipeTerm>& recipe) {
  if (recipe.empty()) throw InvalidArgument("empty recipe");
  int k = gens.level();
  bool has_top = false;
  std::vector<std::uint8_t> digits;
  for (std::size_t j = 0; j < recipe.size(); ++j) {
    const auto& t = recipe[j];
    if (t.index >= gens.size() || (j > 0 && recipe[j - 1].index >= t.index))
      throw InvalidArgument("recipe indices must be increasing generator indices");
    if (t.exponent < 0 || t.exponent >= k) throw InvalidArgument("recipe exponent outside [0, k-1]");
    has_top = has_top || t.exponent == 0;
    const auto& g = gens[t.index].digits();
    digits.resize(g.size(), 0);
    for (std::size_t i = gens[t.index].min_support(); i < g.size(); ++i)
      digits[i] = static_cast<std::uint8_t>(g[i] > t.exponent ? g[i] - t.exponent : 0);
  }
  if (!has_top) throw InvalidArgument("recipe has no exponent-0 term");
  return FinkElement(k, std::move(digits));
}

std::size_t recipe_count(std::size_t m, int k) {
  // sum over j of C(m,j) * (k^j - (k-1)^j) = (k+1)^m - k^m
  std::size_t a = 1, b = 1;
  for (std::size_t i = 0; i < m; ++i) {
    a *= static_cast<std::size_t>(k) + 1;
    b *= static_cast<std::size_t>(k);
  }
  return a - b;
}

bool Span::contains(const FinkElement& f) const { return std::binary_search(elements_.begin(), elements_.end(), f); }

Span span(const BlockSequence& gens, std::size_t budget) {
  Span out;
  std::size_t m = gens.size();
  int k = gens.level();
  if (m == 0) return out;
  if (m > 40 || recipe_count(m, k) > budget) throw BudgetExceeded("span recipe count exceeds budget");
  // Each generator gets a slot value in {-1 (absent), 0..k-1}; odometer over slots.
  std::vector<int> slot(m, -1);
  while (true) {
    std::size_t i = m;
    while (i > 0 && slot[i - 1] == k - 1) slot[--i] = -1;
    if (i == 0) break;
    ++slot[i - 1];
    std::vector<RecipeTerm> recipe;
    bool top = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (slot[j] < 0) continue;
      recipe.push_back({j, slot[j]});
      top = top || slot[j] == 0;
    }
    if (!top) continue;
    auto e = evaluate_recipe(gens, recipe);
    out.recipes_.push_back({e, std::move(recipe)});
  }
  out.elements_.reserve(out.recipes_.size());
  for (const auto& r : out.recipes_) out.elements_.push_back(r.element);
  std::sort(out.elements_.begin(), out.elements_.end());
  out.elements_.erase(std::unique(out.elements_.begin(), out.elements_.end()), out.elements_.end());
  return out;
}

bool is_block_subsequence(const BlockSequence& candidate, const BlockSequence& gens) {
  if (candidate.empty()) return true;
  if (candidate.level() != gens.level()) return false;
  for (std::size_t i = 1; i < candidate.size(); ++i)
    if (!precedes(candidate[i - 1], candidate[i])) return false;
  auto s = span(gens);
  return std::all_of(candidate.begin(), candidate.end(), [&](const FinkElement& f) { return s.contains(f); });
}

namespace {

void extend_tuples(const std::vector<FinkElement>& members, std::size_t d, std::vector<FinkElement>& cur,
                   std::vector<std::vector<FinkElement>>& out) {
  if (cur.size() == d) {
    out.push_back(cur);
    return;
  }
  for (const auto& f : members) {
    if (!cur.empty() && !precedes(cur.back(), f)) continue;
    cur.push_back(f);
    extend_tuples(members, d, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<FinkElement>> block_tuples(const std::vector<FinkElement>& members, std::size_t d) {
  std::vector<std::vector<FinkElement>> out;
  std::vector<FinkElement> cur;
  if (d == 0) return out;
  extend_tuples(members, d, cur, out);
  return out;
}

}  // namespace fink
