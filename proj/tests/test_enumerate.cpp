#include <doctest.h>

#include "kheat/enumerate.hpp"
#include "kheat/kahler.hpp"
#include "kheat/serialize.hpp"
#include "support/brute.hpp"
#include "support/jets.hpp"

using namespace kheat;

namespace {

std::set<std::vector<int>> brute_keys(const std::vector<MultiDigraph>& graphs, bool pointed) {
  std::set<std::vector<int>> keys;
  for (const auto& g : graphs) keys.insert(brute::canonical_key(g, pointed));
  return keys;
}

template <typename Map>
std::set<std::vector<int>> keys_of(const Map& m) {
  std::set<std::vector<int>> keys;
  for (const auto& [k, g] : m) keys.insert(k);
  return keys;
}

std::vector<MultiDigraph> underlying(const std::vector<PointedGraph>& graphs) {
  std::vector<MultiDigraph> out;
  for (const auto& g : graphs) out.push_back(g.graph());
  return out;
}

}  // namespace

TEST_CASE("stable graph counts") {
  const std::vector<std::size_t> expected{1, 4, 15, 82};
  for (int w = 1; w <= 4; ++w) CHECK(enumerate_stable(w).size() == expected[static_cast<std::size_t>(w - 1)]);
  CHECK(enumerate_stable(5, 5).size() > 82);
}

TEST_CASE("stable graphs match exhaustive matrix search") {
  for (int w = 1; w <= 4; ++w) {
    CAPTURE(w);
    const auto graphs = enumerate_stable(w);
    CHECK(brute_keys(graphs, false) == keys_of(brute::stable_graphs(w)));
    for (const auto& g : graphs) {
      CHECK(is_stable(g));
      CHECK(g.weight() == w);
    }
  }
}

TEST_CASE("pointed strongly connected counts") {
  const std::vector<std::size_t> expected{1, 2, 9, 61, 538};
  for (int k = 1; k <= 5; ++k)
    CHECK(enumerate_pointed_stable_strong(k).size() == expected[static_cast<std::size_t>(k - 1)]);
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    CHECK(brute_keys(underlying(enumerate_pointed_stable_strong(k)), true) == keys_of(brute::pointed_stable_strong(k)));
  }
}

TEST_CASE("enumeration output is sorted, unique and well formed") {
  for (int k = 1; k <= 4; ++k) {
    const auto graphs = enumerate_pointed_stable_strong(k);
    std::vector<CanonicalForm> keys;
    for (const auto& g : graphs) {
      keys.push_back(canonical_form(g));
      CHECK(is_strongly_connected(g));
      CHECK(is_stable(g));
      CHECK(g.weight() == k);
    }
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
  }
  for (int w = 1; w <= 4; ++w)
    for (const auto& g : enumerate_pointed_semistable_strong(w)) {
      CHECK(is_semistable(g));
      CHECK(is_strongly_connected(g));
      for (int v = 1; v < g.vertex_count(); ++v) CHECK_FALSE(is_smoothable(g, v));
    }
}

TEST_CASE("bounds are enforced") {
  CHECK_THROWS_AS(enumerate_stable(0), std::out_of_range);
  CHECK_THROWS_AS(enumerate_stable(5), std::out_of_range);
  CHECK_THROWS_AS(enumerate_pointed_stable_strong(0), std::out_of_range);
  CHECK_THROWS_AS(enumerate_pointed_stable_strong(6), std::out_of_range);
}

TEST_CASE("serial and parallel enumeration agree") {
  for (int w = 1; w <= 4; ++w) CHECK(serial::enumerate_stable(w) == enumerate_stable(w));
  for (int k = 1; k <= 4; ++k) {
    const auto a = serial::enumerate_pointed_stable_strong(k);
    const auto b = enumerate_pointed_stable_strong(k);
    CHECK(a == b);
  }
  for (int w = 1; w <= 3; ++w) CHECK(serial::enumerate_pointed_semistable_strong(w) == enumerate_pointed_semistable_strong(w));
}

TEST_CASE("low powers of the Laplacian") {
  PhiCache cache;
  const auto one = laplacian_power(1, cache);
  REQUIRE(one.size() == 1);
  CHECK(one.coefficient(PointedGraph(parse_compact("1; 0>0"))) == 1);

  const auto two = laplacian_power(2, cache);
  REQUIRE(two.size() == 2);
  CHECK(two.coefficient(PointedGraph(parse_compact("1; 0>0*2"))) == 1);
  CHECK(two.coefficient(PointedGraph(parse_compact("2; 0>1, 1>0, 1>1"))) == -1);
}

TEST_CASE("Laplacian coefficients have denominators dividing the automorphism order") {
  PhiCache cache;
  for (int k = 1; k <= 4; ++k) {
    const auto sum = laplacian_power(k, cache);
    for (const auto& [key, term] : sum.terms()) {
      const Rational scaled = term.coefficient * aut_order(term.graph);
      CHECK(scaled.get_den() == 1);
      CHECK(scaled == phi(term.graph, cache) * sign_power(term.graph.vertex_count() - 1));
    }
  }
}

TEST_CASE("graph sums of powers of the Laplacian act as iterated Box on functions") {
  PhiCache cache;
  for (std::uint64_t seed : {1u, 2u}) {
    const auto potential = KahlerPotential::random(2, 8, seed);
    const KahlerGeometry geo(potential);
    const Jet f = testjets::random_jet(2, 6, 100 + seed);
    Jet iterated = f;
    for (int k = 1; k <= 3; ++k) {
      iterated = geo.box(iterated);
      CAPTURE(k);
      CHECK(evaluate_pointed_sum(laplacian_power(k, cache), potential, f) == iterated.value());
    }
  }
}
