#include <doctest.h>

#include <random>

#include "fink/errors.hpp"
#include "fink/extract.hpp"
#include "fink/search.hpp"
#include "fink/span.hpp"
#include "oracles.hpp"

using namespace fink;

using oracle::monochromatic;

TEST_CASE("min-determined extraction at the certified width") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = ColoringSpec::random({DomainKind::Subsets, 1, 3, 1}, 2, rng);
    auto e = min_determined_extract(c, 2, NumberProvider::exact());
    CHECK(e.verified);
    CHECK(e.witness.size() == 2);
    CHECK(oracle::min_determined(c, e.witness));
    CHECK_FALSE(e.trace.steps.empty());
  }
}

TEST_CASE("min-determined extraction along the construction") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = ColoringSpec::random({DomainKind::Subsets, 1, 11, 1}, 2, rng);
    auto e = min_determined_extract(c, 3, NumberProvider::adaptive());
    CHECK(e.verified);
    CHECK(e.witness.size() == 3);
    CHECK(oracle::min_determined(c, e.witness));
  }
}

TEST_CASE("paper-bound provider refuses small widths with a plan") {
  auto c = ColoringSpec::family({DomainKind::Subsets, 1, 6, 1}, 2, Family::Parity);
  try {
    min_determined_extract(c, 3, NumberProvider::paper());
    FAIL("expected InsufficientWidth");
  } catch (const InsufficientWidth& e) {
    CHECK_FALSE(e.plan().empty());
  }
}

TEST_CASE("Folkman extraction") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = ColoringSpec::random({DomainKind::Subsets, 1, 5, 1}, 2, rng);
    auto e = folkman_extract(c, 2, NumberProvider::exact());
    CHECK(e.verified);
    REQUIRE(e.color);
    CHECK(monochromatic(c, e.witness));
    CHECK(c.color(e.witness[0]) == *e.color);
  }
  auto one = ColoringSpec::random({DomainKind::Subsets, 1, 2, 1}, 2, rng);
  CHECK(folkman_extract(one, 1, NumberProvider::exact()).witness.size() == 1);
}

TEST_CASE("code sequences") {
  auto f = parse_sequence("1:6:100000\n1:6:010000\n1:6:001000\n1:6:000100\n1:6:000010\n1:6:000001\n");
  auto h = code_sequence(f);
  REQUIRE(h.size() == 2);
  CHECK(h.level() == 2);
  CHECK(format_sequence(h, 6) == "2:6:121000\n2:6:000121\n");
  CHECK(embed(h, FinkElement::from_digits(2, "12")) == FinkElement::from_digits(2, "010121"));
}

TEST_CASE("U-rewrite against the explicit decomposition") {
  auto f = parse_sequence("1:8:10000000\n1:8:01000000\n1:8:00110000\n1:8:00001000\n1:8:00000100\n1:8:00000011\n");
  auto h = code_sequence(f);
  auto explicit_count = oracle::explicit_u_rewrite(f, h);
  CHECK(explicit_count.elements == recipe_count(2, 2));
  CHECK(explicit_count.failures == 0);
  auto rep = check_u_rewrite(f);
  CHECK(rep.elements == explicit_count.elements);
  CHECK(rep.counterexamples == 0);
}

TEST_CASE("coding extraction for one block") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = ColoringSpec::random({DomainKind::Fink, 2, 6, 1}, 2, rng);
    auto e = code_extract(c, 1, NumberProvider::adaptive());
    CHECK(e.verified);
    CHECK(e.witness.level() == 2);
    CHECK(oracle::supp_top_determined(c, e.witness));
    CHECK(verify_supp_top_determined(c, e.witness));
  }
}

TEST_CASE("step-up plans under the paper bound") {
  auto c = ColoringSpec::family({DomainKind::Fink, 2, 8, 1}, 2, Family::Parity);
  try {
    step_up_extract(c, 2, NumberProvider::paper());
    FAIL("expected InsufficientWidth");
  } catch (const InsufficientWidth& e) {
    CHECK(e.plan().rfind("g_{2,1}(m) <= f[6]∘f[4](6*m-2)", 0) == 0);
  }
  auto m1 = step_up_extract(c, 1, NumberProvider::adaptive());
  CHECK(m1.verified);
  CHECK(monochromatic(c, m1.witness));
}

TEST_CASE("raising the dimension") {
  std::mt19937_64 rng(25);
  int successes = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto c = ColoringSpec::random({DomainKind::FinkSeq, 1, 7, 2}, 2, rng);
    auto direct = find_witness(c, 2);
    try {
      auto e = raise_dimension_extract(c, 2, NumberProvider::adaptive());
      ++successes;
      CHECK(e.verified);
      CHECK(monochromatic(c, e.witness));
      CHECK(direct.has_value());
    } catch (const InsufficientWidth&) {
    }
  }
  CHECK(successes > 0);
}
