#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fink/catalog.hpp"
#include "fink/element.hpp"
#include "fink/errors.hpp"
#include "fink/growth.hpp"
#include "fink/recursion.hpp"

using namespace fink;

namespace {

BigNat two_tower(unsigned height) {
  BigNat v = 1;
  for (unsigned i = 0; i < height; ++i) {
    BigNat next;
    mpz_ui_pow_ui(next.get_mpz_t(), 2, v.get_ui());
    v = next;
  }
  return v;
}

// Chains of d blocks in FIN_k(l), counted by a DP over (min, max) pairs.
std::size_t block_tuples_dp(int k, std::size_t l, std::size_t d) {
  // cnt[a][b]: elements with min support a and max support b
  std::vector<std::vector<std::size_t>> cnt(l, std::vector<std::size_t>(l, 0));
  std::size_t total = 1;
  for (std::size_t i = 0; i < l; ++i) total *= k + 1;
  for (std::size_t code = 1; code < total; ++code) {
    std::vector<int> dig;
    for (std::size_t c = code; c; c /= k + 1) dig.push_back(int(c % (k + 1)));
    if (std::find(dig.begin(), dig.end(), k) == dig.end()) continue;
    std::size_t a = 0;
    while (dig[a] == 0) ++a;
    cnt[a][dig.size() - 1]++;
  }
  // ends[p]: chains of the current length whose last max is p
  std::vector<std::size_t> ends(l, 0);
  for (std::size_t a = 0; a < l; ++a)
    for (std::size_t b = a; b < l; ++b) ends[b] += cnt[a][b];
  for (std::size_t step = 1; step < d; ++step) {
    std::vector<std::size_t> next(l, 0);
    for (std::size_t p = 0; p < l; ++p)
      for (std::size_t a = p + 1; a < l; ++a)
        for (std::size_t b = a; b < l; ++b) next[b] += ends[p] * cnt[a][b];
    ends = next;
  }
  std::size_t sum = 0;
  for (auto e : ends) sum += e;
  return sum;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("hierarchy base levels") {
  for (unsigned x = 0; x < 20; ++x) {
    CHECK(*hier_value(1, x, 100) == 2 * x);
    CHECK(*hier_value(2, x, 100) == BigNat(1) << x);
  }
  CHECK(*hier_value(4, 2, 100) == 4);
  CHECK(*hier_value(4, 3, 100) == 65536);
  CHECK_FALSE(hier_value(4, 4, 100000));
  CHECK_FALSE(hier_value(5, 3, 100000));
}

TEST_CASE("TOWER is a tower of twos") {
  for (unsigned x = 1; x <= 5; ++x) {
    auto f3 = hier_value(3, x, 100000);
    auto t = tower_value(x, 2, 100000);
    REQUIRE(f3);
    REQUIRE(t);
    CHECK(*f3 == two_tower(x));
    CHECK(*t == *f3);
  }
  auto big = *hier_value(3, 5, 100000);
  CHECK(big == BigNat(1) << 65536);
  CHECK(decimal_digits(big) == 19729);
  CHECK(big.get_str().size() == 19729);
  CHECK_FALSE(hier_value(3, 5, 19728));
}

TEST_CASE("tower functions") {
  CHECK(*tower_value(1, 7, 10) == 7);
  CHECK(*tower_value(2, 7, 10) == 128);
  CHECK(*tower_value(3, 2, 10) == 16);
  CHECK_FALSE(tower_value(6, 10, 100000));
}

TEST_CASE("expressions render and evaluate") {
  auto m = GrowthExpr::var("m");
  auto e = GrowthExpr::hier(4)(GrowthExpr::constant(6) * m - GrowthExpr::constant(3));
  CHECK(e.render() == "f[4](6*m-3)");
  CHECK(e.variables() == std::set<std::string>{"m"});
  CHECK(*eval(e, Env{{"m", 1}}, 1000) == 65536);
  CHECK_FALSE(eval(e, Env{{"m", 2}}, 1000));
  CHECK_THROWS_AS(eval(e, Env{}, 1000), InvalidArgument);

  // monus truncates
  auto sub = GrowthExpr::constant(2) - GrowthExpr::constant(5);
  CHECK(*eval(sub, Env{}, 10) == 0);

  auto it = GrowthExpr::iterate(GrowthExpr::hier(1), GrowthExpr::constant(3));
  CHECK(*apply_fn(it, 5, {}, 100) == 40);
  auto comp = GrowthExpr::compose(GrowthExpr::hier(2), GrowthExpr::hier(1));
  CHECK(*apply_fn(comp, 3, {}, 100) == 64);
  CHECK(GrowthExpr::pow(GrowthExpr::constant(2), m).substitute({{"m", GrowthExpr::constant(10)}}).render() == "1024");
}

TEST_CASE("comparison at sample points") {
  auto x = GrowthExpr::var("x");
  auto a = GrowthExpr::hier(2)(x);
  auto b = GrowthExpr::hier(1)(x) * x;
  auto ord = compare_at(a, b, {1, 4, 8, BigNat(1) << 40}, 1000);
  CHECK(ord[0] == Order::Equal);      // 2 vs 2
  CHECK(ord[1] == Order::Less);       // 16 vs 32
  CHECK(ord[2] == Order::Greater);    // 256 vs 128
  CHECK(ord[3] == Order::Indeterminate);
}

TEST_CASE("catalog formulas") {
  CHECK(catalog_expr("g11").render() == "f[4](6*m-3)");
  CHECK(catalog_expr("N_bound").render() == "f[4](3*m)");
  CHECK(catalog_expr("VdWBound").render() == "t[6](m+9)");
  CHECK(catalog_expr("gk1", {{"k", 2}}).render() == "f[6]∘f[4](6*m-2)");
  CHECK(*eval(catalog_expr("g11", {{"m", 1}}), Env{}, 100000) == 65536);
  CHECK(*eval(catalog_expr("h_d", {{"l", 3}, {"d", 2}}), Env{}, 100) == 64);
  CHECK_THROWS_AS(catalog_expr("nonsense"), UnknownName);

  CHECK(parse_rational("0.9") == Rational(9, 10));
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
  CHECK(ceil_log2(Rational(5)) == 3);
  CHECK(ceil_q(Rational(7, 2)) == 4);
}

TEST_CASE("summary table matches the golden file") {
  auto golden = slurp(std::string(FINK_GOLDEN_DIR) + "/summary_table.txt");
  REQUIRE_FALSE(golden.empty());
  CHECK(render_summary_table() == golden);
  auto rows = summary_table();
  REQUIRE(rows.size() == 9);
  CHECK(rows[0][2] == "f[6]∘f[4](6*m-2)");
  CHECK(rows[8][2] == "iter(f[5+2*(k-1)],d)(f[4](6*m-2)+2*(d-1))");
}

TEST_CASE("block tuple counts agree with a min/max DP") {
  for (int k = 1; k <= 3; ++k)
    for (std::size_t l = 1; l <= 5; ++l)
      for (std::size_t d = 1; d <= 3; ++d) CHECK(count_block_tuples(k, l, d) == block_tuples_dp(k, l, d));
  for (std::size_t l = 1; l <= 8; ++l)
    for (std::size_t d = 1; d <= 3; ++d) {
      auto h = count_block_tuples(1, l, d);
      CHECK(h == block_tuples_dp(1, l, d));
      CHECK(h <= std::size_t(1) << (l * d));
    }
  // |FIN_2(2)| = 5 already exceeds d*l^k = 4
  CHECK(count_block_tuples(2, 2, 1) == 5);
}

TEST_CASE("recursion chains") {
  auto names = recursion_chains();
  CHECK(names.size() == 7);
  for (const auto& n : names) {
    auto rep = verify_recursion(n, {}, 20000);
    CHECK(rep.name == n);
    CHECK_FALSE(rep.links.empty());
    for (const auto& link : rep.links) {
      if (n == "h_kd") continue;
      INFO(n << ": " << link.lhs << " <= " << link.rhs);
      CHECK(link.status != LinkStatus::Fails);
    }
  }
  auto hkd = verify_recursion("h_kd");
  CHECK(hkd.links.at(0).status == LinkStatus::Fails);
  CHECK(verify_recursion("h_d").links.at(0).status == LinkStatus::Holds);
  CHECK_THROWS_AS(verify_recursion("nope"), UnknownName);
}
