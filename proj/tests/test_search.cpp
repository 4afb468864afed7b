#include <doctest.h>

#include <random>

#include "fink/coloring.hpp"
#include "fink/csp.hpp"
#include "fink/errors.hpp"
#include "fink/search.hpp"
#include "fink/span.hpp"
#include "oracles.hpp"

using namespace fink;

namespace {

bool every_2coloring_has_ap(std::size_t n, std::size_t len) {
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1;
    if (!oracle::has_ap(c, len)) return false;
  }
  return true;
}

bool every_edge_coloring_has_triangle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  auto index = [&](int a, int b) {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e] == std::pair{a, b}) return e;
    return edges.size();
  };
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    bool found = false;
    for (int a = 0; a < n && !found; ++a)
      for (int b = a + 1; b < n && !found; ++b)
        for (int c = b + 1; c < n && !found; ++c) {
          int x = (mask >> index(a, b)) & 1, y = (mask >> index(a, c)) & 1, z = (mask >> index(b, c)) & 1;
          found = x == y && y == z;
        }
    if (!found) return false;
  }
  return true;
}

// Subsets of n as bitmasks; a pair x < y (max x < min y) is a Folkman witness
// of length 2 when x, y and x|y share a color.
bool has_pair_witness(const std::vector<int>& color_of_mask, unsigned n) {
  for (unsigned x = 1; x < (1u << n); ++x)
    for (unsigned y = 1; y < (1u << n); ++y) {
      unsigned top = 31 - __builtin_clz(x), bottom = __builtin_ctz(y);
      if (top >= bottom) continue;
      if (color_of_mask[x] == color_of_mask[y] && color_of_mask[y] == color_of_mask[x | y]) return true;
    }
  return false;
}

FinkElement from_mask(unsigned mask) {
  std::vector<std::size_t> s;
  for (unsigned i = 0; i < 32; ++i)
    if (mask >> i & 1) s.push_back(i);
  return FinkElement::from_set(s);
}

}  // namespace

TEST_CASE("van der Waerden W(3,2) = 9") {
  CHECK_FALSE(every_2coloring_has_ap(8, 3));
  CHECK(every_2coloring_has_ap(9, 3));

  auto cert = exact_vdw(3, 2);
  CHECK(cert.value == 9);
  REQUIRE(cert.lower_witness);
  const auto& bad = *cert.lower_witness;
  CHECK(bad.domain().n == 8);
  std::vector<int> colors;
  for (std::uint64_t i = 0; i < 8; ++i) colors.push_back(bad.color_int(i));
  CHECK_FALSE(oracle::has_ap(colors, 3));
}

TEST_CASE("Ramsey R(3,3) = 6") {
  CHECK_FALSE(every_edge_coloring_has_triangle(5));
  CHECK(every_edge_coloring_has_triangle(6));
  auto cert = exact_ramsey(2, 3, 2);
  CHECK(cert.value == 6);
  REQUIRE(cert.lower_witness);
  CHECK_FALSE(oracle::has_mono_triangle(*cert.lower_witness));
  CHECK_FALSE(has_monochromatic_clique(*cert.lower_witness, 3));
}

TEST_CASE("Folkman base case for pairs") {
  // The parity coloring avoids length-2 witnesses on FIN(3).
  for (unsigned n = 3; n <= 4; ++n) {
    std::vector<int> parity(1u << n);
    for (unsigned x = 1; x < (1u << n); ++x) parity[x] = __builtin_popcount(x) % 2;
    CHECK(has_pair_witness(parity, n) == (n == 4));
  }
  // Some 2-coloring of FIN(4) avoids every pair.
  bool bad_at_4 = false;
  for (unsigned mask = 0; mask < (1u << 15) && !bad_at_4; ++mask) {
    std::vector<int> c(16);
    for (unsigned x = 1; x < 16; ++x) c[x] = (mask >> (x - 1)) & 1;
    bad_at_4 = !has_pair_witness(c, 4);
  }
  CHECK(bad_at_4);

  auto cert = exact_g(1, 1, 2, 2);
  CHECK(cert.value == 5);
  REQUIRE(cert.lower_witness);
  CHECK_FALSE(find_witness(*cert.lower_witness, 2));
}

TEST_CASE("witness search returns verified least witnesses") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    auto c = ColoringSpec::random({DomainKind::Subsets, 1, 5, 1}, 2, rng);
    SearchOptions serial;
    serial.parallel = false;
    auto a = find_witness(c, 2, serial);
    auto b = find_witness(c, 2);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->witness == b->witness);
    CHECK(a->verified);
    CHECK(oracle::monochromatic(c, a->witness));
    int col = -1;
    CHECK(verify_monochromatic(c, a->witness, &col));
    CHECK(col == a->color);
  }
}

TEST_CASE("min-determined numbers") {
  CHECK(exact_min_determined(1, 2).value == 1);
  auto cert = exact_min_determined(2, 2);
  CHECK(cert.value == 3);
  REQUIRE(cert.lower_witness);
  CHECK_FALSE(find_min_determined(*cert.lower_witness, 2));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = ColoringSpec::random({DomainKind::Subsets, 1, 3, 1}, 2, rng);
    auto seq = find_min_determined(c, 2);
    REQUIRE(seq);
    // color of x0, x0|x1 equal; x1 alone may differ
    auto x0 = (*seq)[0], x1 = (*seq)[1];
    CHECK(c.color(x0) == c.color(block_sum(x0, x1)));
    CHECK(verify_min_determined(c, *seq));
  }
}

TEST_CASE("bad colorings are independently bad") {
  auto bad = find_bad_coloring(1, 4, 2, 2);
  REQUIRE(bad);
  std::vector<int> c(16);
  for (unsigned x = 1; x < 16; ++x) c[x] = bad->color(from_mask(x));
  CHECK_FALSE(has_pair_witness(c, 4));
  CHECK_FALSE(find_bad_coloring(1, 5, 2, 2));
}

TEST_CASE("serial and parallel avoidance agree") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    AvoidanceProblem p;
    p.variables = 6 + trial % 6;
    p.colors = 2 + trial % 2;
    for (int j = 0; j < 12; ++j) {
      Constraint con;
      for (int g = 0; g < 2; ++g) {
        std::vector<std::uint32_t> group;
        for (int v = 0; v < 2; ++v) group.push_back(static_cast<std::uint32_t>(rng() % p.variables));
        con.groups.push_back(group);
      }
      p.constraints.push_back(con);
    }
    auto a = avoid_serial(p, 1'000'000);
    auto b = avoid_parallel(p, 1'000'000, 4);
    CHECK(a.coloring == b.coloring);
    if (a.coloring)
      for (const auto& con : p.constraints) CHECK_FALSE(hits(con, *a.coloring));
  }
}

TEST_CASE("budgets are reported, not confused with absence") {
  SearchOptions tiny;
  tiny.node_budget = 10;
  CHECK_THROWS_AS(exact_g(1, 1, 3, 2, tiny), BudgetExceeded);
}

TEST_CASE("coloring files round trip") {
  std::mt19937_64 rng(1);
  auto table = ColoringSpec::random({DomainKind::Fink, 2, 3, 1}, 3, rng);
  auto again = ColoringSpec::parse(table.serialize());
  CHECK(again.serialize() == table.serialize());
  for (const auto& pt : domain_points(table.domain())) CHECK(again.color(pt) == table.color(pt));

  auto fam = ColoringSpec::family({DomainKind::Subsets, 1, 6, 1}, 2, Family::Parity);
  CHECK(ColoringSpec::parse(fam.serialize()).serialize() == fam.serialize());
  CHECK(fam.color(FinkElement::from_set({1, 4})) == 0);
  CHECK(fam.color(FinkElement::from_set({1, 2, 4})) == 1);
  CHECK_THROWS_AS(ColoringSpec::parse("domain=fink k=1 n=2 d=1 r=2\nbogus"), InvalidArgument);
}
