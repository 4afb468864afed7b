#pragma once

// Brute-force checkers shared by the unit tests and the acceptance binary.
// Nothing here calls the library's own verifiers.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fink/coloring.hpp"
#include "fink/element.hpp"

namespace oracle {

using fink::BlockSequence;
using fink::ColoringSpec;
using fink::FinkElement;

inline bool has_ap(const std::vector<int>& color, std::size_t len) {
  std::size_t n = color.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t d = 1; a + (len - 1) * d < n; ++d) {
      bool mono = true;
      for (std::size_t j = 1; j < len && mono; ++j) mono = color[a + j * d] == color[a];
      if (mono) return true;
    }
  return false;
}

inline bool has_mono_triangle(const ColoringSpec& c) {
  std::size_t n = c.domain().n;
  auto edge = [&](std::size_t a, std::size_t b) { return c.color(FinkElement::from_set({a, b})); };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t d = b + 1; d < n; ++d)
        if (edge(a, b) == edge(a, d) && edge(a, d) == edge(b, d)) return true;
  return false;
}

struct Member {
  FinkElement element;
  std::vector<std::size_t> top;
  std::size_t least;
};

// Span by brute-force exponent assignment (-1 = generator absent).
inline std::vector<Member> span_members(const BlockSequence& gens) {
  int k = gens.level();
  std::size_t m = gens.size(), w = gens.width();
  std::vector<Member> out;
  std::vector<int> e(m, -1);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == m) {
      std::vector<std::uint8_t> d(w, 0);
      std::vector<std::size_t> top;
      std::size_t least = m;
      for (std::size_t j = 0; j < m; ++j) {
        if (e[j] < 0) continue;
        least = std::min(least, j);
        if (e[j] == 0) top.push_back(j);
        for (std::size_t p = 0; p < w; ++p) d[p] += static_cast<std::uint8_t>(std::max(0, gens[j].at(p) - e[j]));
      }
      if (!top.empty()) out.push_back({FinkElement(k, d), top, least});
      return;
    }
    for (int x = -1; x < k; ++x) {
      e[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// Every d-tuple of block-ordered span members has one color (d from the domain).
inline bool monochromatic(const ColoringSpec& c, const BlockSequence& seq) {
  auto members = span_members(seq);
  std::size_t d = c.domain().d;
  std::optional<int> col;
  std::vector<FinkElement> tuple;
  std::function<bool()> rec = [&]() {
    if (tuple.size() == d) {
      int x = c.color(tuple);
      if (!col) col = x;
      return x == *col;
    }
    for (const auto& mem : members) {
      if (!tuple.empty() && !fink::precedes(tuple.back(), mem.element)) continue;
      tuple.push_back(mem.element);
      bool ok = rec();
      tuple.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return rec();
}

inline bool min_determined(const ColoringSpec& c, const BlockSequence& seq) {
  std::map<std::size_t, int> by_least;
  for (const auto& mem : span_members(seq)) {
    int x = c.color(mem.element);
    auto [it, fresh] = by_least.emplace(mem.least, x);
    if (!fresh && it->second != x) return false;
  }
  return true;
}

inline bool supp_top_determined(const ColoringSpec& c, const BlockSequence& seq) {
  std::map<std::vector<std::size_t>, int> by_top;
  for (const auto& mem : span_members(seq)) {
    int x = c.color(mem.element);
    auto [it, fresh] = by_top.emplace(mem.top, x);
    if (!fresh && it->second != x) return false;
  }
  return true;
}

inline bool is_block_ordered(const std::vector<FinkElement>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!fink::precedes(xs[i - 1], xs[i])) return false;
  return true;
}

inline bool in_level1_span(const FinkElement& x, const BlockSequence& f) {
  // a union of whole generators
  std::vector<bool> covered(f.width(), false);
  for (const auto& g : f) {
    bool any = false, all = true;
    for (auto p : g.support()) {
      any |= x.at(p) > 0;
      all &= x.at(p) > 0;
    }
    if (any && !all) return false;
    if (all)
      for (auto p : g.support()) covered[p] = true;
  }
  for (auto p : x.support())
    if (p >= covered.size() || !covered[p]) return false;
  return true;
}

struct RewriteCount {
  std::size_t elements = 0;
  std::size_t failures = 0;
};

/// For k = 1 and h_i = f_{3i} + U f_{3i+1} + f_{3i+2}: every g in <h> with top
/// indices i_1 < ... < i_l splits as w_0 + U w_1 + w_2 + ... + w_{2l}, where
/// w_0 runs through f_{3 i_1}, w_{2j-1} = f_{3 i_j + 1}, and w_{2j} runs from
/// f_{3 i_j + 2} up to f_{3 i_{j+1}}. Lower (T h_i = f_{3i+1}) terms join the even slot they fall in.
inline RewriteCount explicit_u_rewrite(const BlockSequence& f, const BlockSequence& h) {
  RewriteCount out;
  std::size_t w = f.width();
  for (const auto& mem : span_members(h)) {
    ++out.elements;
    std::vector<std::vector<std::uint8_t>> parts(2 * mem.top.size() + 1, std::vector<std::uint8_t>(w, 0));
    auto add = [&](std::size_t slot, const FinkElement& x) {
      for (std::size_t p = 0; p < w; ++p) parts[slot][p] += x.at(p);
    };
    std::size_t slot = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      bool used = false;
      for (auto p : h[i].support()) used |= mem.element.at(p) > 0;
      if (!used) continue;
      if (!std::count(mem.top.begin(), mem.top.end(), i)) {
        add(slot, f[3 * i + 1]);
        continue;
      }
      add(slot, f[3 * i]);
      add(slot + 1, f[3 * i + 1]);
      add(slot + 2, f[3 * i + 2]);
      slot += 2;
    }
    std::vector<FinkElement> ws;
    std::vector<std::uint8_t> total(w, 0);
    bool ok = true;
    for (std::size_t j = 0; j < parts.size() && ok; ++j) {
      ok = std::any_of(parts[j].begin(), parts[j].end(), [](auto v) { return v > 0; });
      if (!ok) break;
      ws.emplace_back(1, parts[j]);
      ok = in_level1_span(ws.back(), f);
      for (std::size_t p = 0; p < w; ++p) total[p] += parts[j][p] ? parts[j][p] + (j % 2) : 0;
    }
    ok = ok && is_block_ordered(ws) && FinkElement(2, total) == mem.element;
    out.failures += !ok;
  }
  return out;
}

}  // namespace oracle
