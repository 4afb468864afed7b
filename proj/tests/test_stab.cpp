#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "fink/catalog.hpp"
#include "fink/errors.hpp"
#include "fink/stab.hpp"

using namespace fink;

namespace {

Rational rpow(const Rational& r, std::size_t e) {
  Rational out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= r;
  return out;
}

// y^(n+1)(3i), y^(n+1)(3i+1), y^(n+1)(3i+2) = r^(n+1), y^(n)(i), r^(n+1)
std::vector<Rational> y_direct(std::size_t n, const Rational& r) {
  std::vector<Rational> y{1};
  for (std::size_t level = 1; level <= n; ++level) {
    std::vector<Rational> next;
    for (const auto& v : y) {
      next.push_back(rpow(r, level));
      next.push_back(v);
      next.push_back(rpow(r, level));
    }
    y = next;
  }
  return y;
}

// Min over all interleavings of the two profiles of the max coordinate gap;
// positions hold (a_i, 0), (0, b_j) or (a_i, b_j).
Rational brute_dis(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::function<Rational(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> Rational {
    if (i == a.size() && j == b.size()) return 0;
    Rational best = -1;
    auto take = [&](Rational gap, std::size_t ni, std::size_t nj) {
      Rational rest = go(ni, nj), g = abs(gap);
      Rational v = std::max(g, rest);
      if (best < 0 || v < best) best = v;
    };
    if (i < a.size()) take(a[i], i + 1, j);
    if (j < b.size()) take(b[j], i, j + 1);
    if (i < a.size() && j < b.size()) take(a[i] - b[j], i + 1, j + 1);
    return best;
  };
  return go(0, 0);
}

PosVector random_vector(std::mt19937_64& rng, std::size_t max_support) {
  std::map<std::size_t, Rational> c;
  std::size_t len = 1 + rng() % max_support, pos = rng() % 3;
  for (std::size_t i = 0; i < len; ++i) {
    c[pos] = Rational(static_cast<long>(1 + rng() % 8), 8);
    pos += 1 + rng() % 3;
  }
  return PosVector(c);
}

}  // namespace

TEST_CASE("vectors and text format") {
  auto v = parse_vector("0:1/2\n3:1\n# comment\n5:0\n");
  CHECK(v.support_size() == 2);
  CHECK(v.norm() == 1);
  CHECK(format_vector(v) == "0:1/2\n3:1\n");
  CHECK_THROWS_AS(parse_vector("1:1\n1:1/2\n"), InvalidArgument);
  CHECK_THROWS_AS(PosVector({{0, Rational(-1)}}), InvalidArgument);
  CHECK(sup_distance(v, PosVector::unit(3)) == Rational(1, 2));
}

TEST_CASE("y vectors follow the recursion") {
  for (const auto& r : {Rational(1, 2), Rational(1, 3), Rational(2, 3)})
    for (std::size_t n = 0; n <= 6; ++n) {
      auto y = build_y(n, r);
      auto direct = y_direct(n, r);
      REQUIRE(y.support_size() == direct.size());
      CHECK(y.support_size() == static_cast<std::size_t>(std::pow(3, n)));
      CHECK(y.profile() == direct);
      CHECK(y.min_support() == 0);
      CHECK(y.max_support() + 1 == direct.size());
      // coefficient multiset: c_n(e) = [e = 0] + 2 * sum_{j=1..n} c_{n-j}(e-j)
      std::vector<std::vector<std::size_t>> law(n + 1, std::vector<std::size_t>(n + 1, 0));
      for (std::size_t q = 0; q <= n; ++q) {
        law[q][0] = 1;
        for (std::size_t j = 1; j <= q; ++j)
          for (std::size_t e = j; e <= n; ++e) law[q][e] += 2 * law[q - j][e - j];
      }
      auto ex = y_exponents(n);
      for (std::size_t e = 0; e <= n; ++e)
        CHECK(static_cast<std::size_t>(std::count(ex.begin(), ex.end(), int(e))) == law[n][e]);
    }
  CHECK(format_vector(build_y(1, Rational(1, 2))) == "0:1/2\n1:1\n2:1/2\n");
}

TEST_CASE("mountains reassemble exactly") {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto parts = mountains_decompose(n, Rational(1, 2));
    CHECK(parts.size() == 2 * n + 1);
    CHECK(reassemble(parts) == build_y(n, Rational(1, 2)));
    for (const auto& p : parts) {
      if (p.center) {
        CHECK(p.vec.support_size() == 1);
        continue;
      }
      auto copy = build_y(p.depth, Rational(1, 2)).scaled(rpow(Rational(1, 2), p.scale));
      CHECK(dist_equal(p.vec, copy));
    }
  }
  auto parts = mountains_decompose(2, Rational(1, 2));
  parts.push_back(parts.front());
  CHECK_THROWS_AS(reassemble(parts), OverlapError);
}

TEST_CASE("dis matches brute-force interleaving") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto x = random_vector(rng, 5), y = random_vector(rng, 5);
    auto expected = brute_dis(x.profile(), y.profile());
    CHECK(dis(x, y) == expected);
    CHECK(dis_reference(x, y) == expected);
    CHECK(dis(y, x) == expected);
  }
  auto y2 = build_y(2, Rational(1, 2));
  CHECK(dis(y2, y2.shifted(17)) == 0);
  CHECK(dist_equal(y2, y2.shifted(4)));
  CHECK_FALSE(dist_equal(y2, build_y(1, Rational(1, 2))));
}

TEST_CASE("dis agrees with the reference on larger profiles") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = random_vector(rng, 40), y = random_vector(rng, 40);
    CHECK(dis(x, y) == dis_reference(x, y));
  }
}

TEST_CASE("pre-diameter witnesses for t = 1") {
  Rational r(1, 2);
  for (std::size_t s = 1; s <= 3; ++s) {
    std::size_t top = s;  // exponents <= s*t
    auto base = build_y(s, r);
    std::size_t len = base.support_size();
    for (std::size_t code = 0; code < (top + 1) * (top + 1) * (top + 1); ++code) {
      std::vector<int> alpha{int(code % (top + 1)), int(code / (top + 1) % (top + 1)), int(code / (top + 1) / (top + 1))};
      if (*std::min_element(alpha.begin(), alpha.end()) != 0) continue;
      INFO("s=" << s << " alpha=" << alpha[0] << alpha[1] << alpha[2]);
      auto w = pre_diameter_witness(s, 1, r, alpha);
      CHECK(check_pre_diameter(s, 1, r, alpha, w));
      // independent reading of the claim
      PosVector z;
      for (std::size_t l = 0; l < 3; ++l) z = z + base.shifted(l * len).scaled(rpow(r, alpha[l]));
      CHECK(dist_equal(w, base));
      for (const auto& [pos, val] : z.coeffs())
        for (std::size_t j = 0; j <= (s - 1); ++j)
          if (val == rpow(r, j)) CHECK((w.at(pos) == rpow(r, j) || w.at(pos) == rpow(r, j + 1)));
    }
  }
}

TEST_CASE("small-diameter parameters") {
  Rational eps(9, 10);
  auto seq = small_diameter_seq(eps, 1);
  CHECK(1 - seq.r < eps / 4);
  CHECK(rpow(seq.r, seq.s - 1) < eps / 4);
  CHECK(seq.r.get_den() <= 64);
  CHECK(diameter_params_ok(eps, 1, seq.r, seq.s));
  CHECK(seq.blocks.size() == 3);
  CHECK(seq.dimension == static_cast<std::size_t>(std::pow(3, seq.s + 1)));
  for (const auto& b : seq.blocks) CHECK(dist_equal(b, build_y(seq.s, seq.r)));
  // a smaller numerator would break the first inequality
  CHECK_FALSE(1 - Rational(seq.r.get_num() - 1, seq.r.get_den()) < eps / 4);

  std::mt19937_64 rng(33);
  for (int i = 0; i < 3; ++i) {
    auto a = sample_sphere_point(seq.blocks, rng), b = sample_sphere_point(seq.blocks, rng);
    CHECK(a.norm() == 1);
    CHECK(dis(a, b) < eps);
  }
  CHECK_THROWS_AS(small_diameter_seq(Rational(1, 2), 1), BudgetExceeded);
}

TEST_CASE("positive nets") {
  for (std::size_t l = 1; l <= 4; ++l)
    for (std::size_t q = 1; q <= 3; ++q) {
      auto net = positive_net(l, q);
      CHECK(net.size() == positive_net_size(l, q));
      std::set<std::vector<Rational>> distinct;
      for (const auto& v : net) {
        CHECK(v.norm() == 1);
        std::vector<Rational> coords;
        for (std::size_t i = 0; i < l; ++i) {
          Rational c = v.at(i) * q;
          CHECK(c.get_den() == 1);
          coords.push_back(v.at(i));
        }
        distinct.insert(coords);
      }
      CHECK(distinct.size() == net.size());
    }
}

TEST_CASE("oscillation kernels agree") {
  auto net = positive_net(3, 4);
  for (auto spec : {"proj:1", "sup", "dist:0=1,2=1/2", "avg:0=1/3,1=1/3,2=1/3"}) {
    auto f = LipschitzFn::parse(spec);
    CHECK(oscillation(f, net) == oscillation_serial(f, net));
  }
  CHECK(oscillation(LipschitzFn::sup_norm(), net) == 0);
  CHECK(oscillation(LipschitzFn::projection(0), net) == 1);
  CHECK(LipschitzFn::parse("avg:0=1/2,1=1/2").lipschitz_constant() == 1);
}

TEST_CASE("almost-spreading sets") {
  auto f = LipschitzFn::parse("avg:0=1/2,1=1/4,2=1/4");
  auto res = spreading_extract(f, 8, 2, 1, Rational(1, 2), NumberProvider::adaptive());
  CHECK(res.verified);
  CHECK(res.set.size() == 2);
  CHECK(std::is_sorted(res.set.begin(), res.set.end()));
  CHECK(res.colors == 6);
  CHECK(verify_spreading(f, res.set, 2, Rational(1, 2), res.colors));
  CHECK_THROWS(spreading_extract(f, 8, 2, Rational(1, 10), Rational(1, 2), NumberProvider::adaptive()));
  CHECK_THROWS_AS(spreading_extract(f, 8, 2, 1, Rational(1, 2), NumberProvider::paper()), InsufficientWidth);
}

TEST_CASE("stabilization pipeline") {
  auto f = LipschitzFn::parse("proj:0");
  auto res = stabilize(f, 1, Rational(1, 2), 2, StabMode::Empirical);
  CHECK(res.osc < Rational(1, 2));
  CHECK(res.blocks.size() == 2);
  CHECK(res.net_points > 0);
  for (std::size_t i = 1; i < res.blocks.size(); ++i)
    CHECK(res.blocks[i - 1].max_support() < res.blocks[i].min_support());

  auto c = stabilize(LipschitzFn::constant(Rational(1, 3)), 0, Rational(1, 2), 3, StabMode::Guaranteed);
  CHECK(c.certified);
  CHECK(c.osc == 0);

  try {
    stabilize(LipschitzFn::sup_norm(), 1, Rational(1, 2), 2, StabMode::Guaranteed);
    FAIL("expected InsufficientWidth");
  } catch (const InsufficientWidth& e) {
    CHECK(e.plan().find("mbar") != std::string::npos);
    CHECK(e.plan().find("D = 3^(") != std::string::npos);
  }
}
