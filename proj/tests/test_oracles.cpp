#include <doctest.h>

#include "kheat/oracles.hpp"

using namespace kheat;

TEST_CASE("pairing identity") {
  CHECK(pairing_identity_lhs({1, 1}, 2) == 10);
  CHECK(binomial(5, 3) == 10);
  CHECK(lemma_pairing_identity({1, 1}, 2));
  CHECK(lemma_pairing_identity({0}, 4));
  CHECK(pairing_identity_lhs({2}, 3) == binomial(5, 2));
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 2; ++c)
        for (int l = 0; l <= 5; ++l) CHECK(lemma_pairing_identity({a, b, c}, l));
  CHECK_THROWS(pairing_identity_lhs({}, 1));
}

TEST_CASE("alternating sum") {
  CHECK(lemma_alternating_sum(1, 1, 0) == -1);
  CHECK(lemma_alternating_sum(1, 3, 2) == -1);
  CHECK(lemma_alternating_sum(2, 4, 1) == 1);
  for (int m = 1; m <= 6; ++m)
    for (int w = m; w <= 6; ++w)
      for (int d = 0; d <= 3; ++d) CHECK(lemma_alternating_sum(m, w, d) == sign_power(m));
  CHECK_THROWS_AS(lemma_alternating_sum(0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(lemma_alternating_sum(3, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(lemma_alternating_sum(1, 2, -1), std::invalid_argument);
}

TEST_CASE("reports") {
  IdentityReport r;
  r.name = "demo";
  r.record(true, "first");
  r.record(false, "second");
  r.record(false, "third");
  CHECK_FALSE(r.passed);
  CHECK(r.checked == 3);
  CHECK(r.matched == 1);
  CHECK(r.counterexample == std::optional<std::string>("second"));
  CHECK(r.summary() == "demo: FAIL 1/3");
  const auto j = r.to_json();
  CHECK(j.at("passed") == false);
  CHECK(j.at("counterexample") == "second");
}

TEST_CASE("fast suites pass") {
  PhiCache cache;
  SuiteOptions quick;
  quick.seeds = 1;
  quick.dims = {1, 2};
  for (const char* name : {"table1", "coefficients", "identities", "duality", "multiplicativity", "appendix"}) {
    const auto r = run_suite(name, quick, cache);
    CAPTURE(r.to_text());
    CHECK(r.passed);
    CHECK(r.checked > 0);
    CHECK(r.checked == r.matched);
  }
  CHECK(run_suite("table1").summary() == "table1: PASS 12/12");
}

TEST_CASE("suite names") {
  CHECK(suite_names().size() == 8);
  PhiCache cache;
  CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}, cache), std::invalid_argument);
}
