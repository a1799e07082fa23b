#include <doctest.h>

#include <random>

#include "kheat/digraph.hpp"
#include "kheat/enumerate.hpp"
#include "kheat/serialize.hpp"
#include "support/brute.hpp"

using namespace kheat;

namespace {

MultiDigraph random_graph(std::mt19937& rng, int n, int max_mult) {
  std::uniform_int_distribution<int> mult(0, max_mult);
  MultiDigraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) g.add_edges(u, v, mult(rng));
  return g;
}

MultiDigraph shuffled(std::mt19937& rng, const MultiDigraph& g, bool keep_first) {
  std::vector<int> order(static_cast<std::size_t>(g.vertex_count()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin() + (keep_first ? 1 : 0), order.end(), rng);
  return relabeled(g, order);
}

PointedGraph pointed(const char* compact) { return PointedGraph(parse_compact(compact)); }

}  // namespace

TEST_CASE("degrees") {
  CHECK(degrees(MultiDigraph::from_rows({{2}}), 0) == Degrees{2, 2});
  CHECK(degrees(MultiDigraph::from_rows({{0, 2}, {2, 0}}), 0) == Degrees{2, 2});
  CHECK(degrees(MultiDigraph(1), 0) == Degrees{0, 0});
  CHECK_THROWS(degrees(MultiDigraph(1), 1));
}

TEST_CASE("weight") {
  CHECK(MultiDigraph::from_rows({{2}}).weight() == 1);
  CHECK(pointed("1; 0>0*3").weight() == 3);
  CHECK(pointed("2; 1>1, 1>0, 0>1").weight() == 2);
  CHECK(MultiDigraph(3).weight() == -3);
}

TEST_CASE("stability predicates") {
  CHECK(is_stable(MultiDigraph::from_rows({{2}})));
  CHECK_FALSE(is_semistable(MultiDigraph::from_rows({{0, 1}, {1, 0}})));
  CHECK(is_stable(pointed("2; 1>1, 1>0, 0>1")));
  CHECK(is_stable(pointed("1;")));  // no ordinary vertices
  CHECK(is_semistable(MultiDigraph::from_rows({{1, 1}, {1, 0}})) == false);
  CHECK(is_semistable(MultiDigraph::from_rows({{1, 1}, {1, 1}})));
}

TEST_CASE("strong connectivity") {
  CHECK(is_strongly_connected(pointed("1; 0>0*4")));
  CHECK(is_strongly_connected(MultiDigraph(1)));
  CHECK_FALSE(is_strongly_connected(pointed("2; 1>1*2")));
  CHECK(is_strongly_connected(pointed("2; 1>0, 0>1")));
  CHECK_FALSE(is_strongly_connected(pointed("2; 0>1")));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = random_graph(rng, 1 + trial % 5, 1);
    CHECK(is_strongly_connected(g) == brute::strongly_connected(g));
  }
}

TEST_CASE("canonical form separates exactly the isomorphism classes") {
  CHECK(canonical_form(MultiDigraph::from_rows({{1, 1}, {1, 1}})) !=
        canonical_form(MultiDigraph::from_rows({{0, 2}, {2, 0}})));
  for (int k = 1; k < 6; ++k)
    CHECK(canonical_form(MultiDigraph::from_rows({{k}})) != canonical_form(MultiDigraph::from_rows({{k + 1}})));

  std::mt19937 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + trial % 6;
    const auto a = random_graph(rng, n, 2);
    const auto b = trial % 2 ? shuffled(rng, a, false) : random_graph(rng, n, 2);
    const bool same = brute::canonical_key(a, false) == brute::canonical_key(b, false);
    CHECK(same == (canonical_form(a) == canonical_form(b)));
    const bool same_pointed = brute::canonical_key(a, true) == brute::canonical_key(b, true);
    CHECK(same_pointed == (canonical_form(PointedGraph(a)) == canonical_form(PointedGraph(b))));
  }
}

TEST_CASE("canonical form of structured graphs with large automorphism groups") {
  // Disjoint cycles and complete graphs stress the refinement search.
  std::mt19937 rng(5);
  MultiDigraph cycles(9), other(9);
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 3; ++i) cycles.add_edges(3 * c + i, 3 * c + (i + 1) % 3);
  for (int i = 0; i < 9; ++i) other.add_edges(i, (i + 1) % 9);
  CHECK(canonical_form(cycles) != canonical_form(other));
  CHECK(canonical_form(cycles) == canonical_form(shuffled(rng, cycles, false)));
  CHECK(vertex_automorphism_count(cycles) == 3 * 3 * 3 * 6);
  CHECK(vertex_automorphism_count(other) == 9);

  MultiDigraph complete(6);
  for (int u = 0; u < 6; ++u)
    for (int v = 0; v < 6; ++v)
      if (u != v) complete.add_edges(u, v);
  CHECK(vertex_automorphism_count(complete) == 720);
  CHECK(vertex_automorphism_count(PointedGraph(complete)) == 120);
}

TEST_CASE("canonical form is invariant under relabeling of enumerated graphs") {
  std::mt19937 rng(3);
  for (int w = 1; w <= 3; ++w)
    for (const auto& g : enumerate_stable(w))
      for (int t = 0; t < 5; ++t) CHECK(canonical_form(shuffled(rng, g, false)) == canonical_form(g));
  for (int w = 1; w <= 3; ++w)
    for (const auto& g : enumerate_pointed_semistable_strong(w))
      for (int t = 0; t < 3; ++t)
        CHECK(canonical_form(PointedGraph(shuffled(rng, g.graph(), true))) == canonical_form(g));
}

TEST_CASE("canonical graph is isomorphic to the input and serializes to the key") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(rng, 1 + trial % 5, 2);
    const auto c = canonical_graph(g);
    CHECK(brute::canonical_key(c, false) == brute::canonical_key(g, false));
    CHECK(to_compact(c) == canonical_form(g).key);
    const auto pc = canonical_graph(PointedGraph(g));
    CHECK(brute::canonical_key(pc.graph(), true) == brute::canonical_key(g, true));
    CHECK("*" + to_compact(pc.graph()) == canonical_form(PointedGraph(g)).key);
  }
}

TEST_CASE("canonical form enforces its vertex bound") {
  CHECK_NOTHROW(canonical_form(MultiDigraph(kMaxCanonicalVertices)));
  CHECK_THROWS_AS(canonical_form(MultiDigraph(kMaxCanonicalVertices + 1)), GraphError);
}

TEST_CASE("automorphism order") {
  CHECK(aut_order(MultiDigraph::from_rows({{2}})) == 2);
  CHECK(aut_order(MultiDigraph::from_rows({{0, 2}, {2, 0}})) == 8);
  CHECK(aut_order(MultiDigraph::from_rows({{1, 1}, {1, 1}})) == 2);

  std::mt19937 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = random_graph(rng, 1 + trial % 5, trial % 3 == 0 ? 1 : 2);
    CHECK(aut_order(g) == brute::aut_order(g, false));
    CHECK(aut_order(PointedGraph(g)) == brute::aut_order(g, true));
  }
}

TEST_CASE("orbit counting: labelled copies times automorphisms is n!") {
  for (int w = 1; w <= 2; ++w)
    for (const auto& g : enumerate_stable(w)) {
      const int n = g.vertex_count();
      std::set<std::vector<int>> labelled;
      std::vector<int> p(static_cast<std::size_t>(n));
      std::iota(p.begin(), p.end(), 0);
      do {
        labelled.insert(relabeled(g, p).adjacency());
      } while (std::next_permutation(p.begin(), p.end()));
      CHECK(Integer(static_cast<long>(labelled.size())) * vertex_automorphism_count(g) == factorial(n));
    }
}

TEST_CASE("edge deletion") {
  CHECK(delete_edge(pointed("1; 0>0*2"), 0, 0) == pointed("1; 0>0"));
  const auto cut = delete_edge(pointed("2; 1>0, 0>1"), 1, 0);
  CHECK_FALSE(is_strongly_connected(cut));
  CHECK_THROWS_AS(delete_edge(pointed("2; 1>0"), 0, 1), GraphError);
  std::mt19937 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_graph(rng, 3, 2);
    if (g(1, 2) == 0) g.add_edges(1, 2);
    CHECK(delete_edge(g, 1, 2).weight() == g.weight() - 1);
  }
}

TEST_CASE("smoothing") {
  CHECK(smooth_vertex(pointed("2; 0>1, 1>0"), 1) == pointed("1; 0>0"));
  CHECK(smooth_all(pointed("3; 0>1, 1>2, 2>0")) == pointed("1; 0>0"));
  const auto looped = smooth_vertex(pointed("3; 0>1, 1>0, 1>2, 2>1, 1>1"), 2);
  CHECK(looped == pointed("2; 0>1, 1>0, 1>1*2"));
  CHECK_FALSE(is_smoothable(pointed("2; 1>1"), 1));  // a loop is not a pair of neighbours
  CHECK_FALSE(is_smoothable(pointed("2; 0>1, 1>0"), 0));
  CHECK_THROWS_AS(smooth_vertex(pointed("2; 0>1*2, 1>0*2"), 1), GraphError);

  const auto g = pointed("4; 0>1, 1>2, 2>3, 3>0, 3>3");
  const auto s = smooth_vertex(g, 1);
  CHECK(s.edge_count() == g.edge_count() - 1);
  CHECK(s.vertex_count() == g.vertex_count() - 1);
  CHECK(s.weight() == g.weight());
}

TEST_CASE("smooth_all does not depend on the smoothing order") {
  const auto g = pointed("5; 0>1, 1>2, 2>3, 3>4, 4>0, 2>2, 0>0");
  const auto a = smooth_vertex(smooth_vertex(g, 4), 3);
  const auto b = smooth_vertex(smooth_vertex(g, 3), 3);
  CHECK(canonical_form(smooth_all(a)) == canonical_form(smooth_all(b)));
  CHECK(canonical_form(smooth_all(g)) == canonical_form(smooth_all(a)));
}

TEST_CASE("contraction and stabilization") {
  const auto g = pointed("2; 0>1, 1>0*2");  // the ordinary vertex has in-degree 1
  CHECK(is_contractible(g, 0, 1));
  const auto c = contract_edge(g, 0, 1);
  CHECK(c == pointed("1; 0>0*2"));
  CHECK(c.weight() == g.weight());
  CHECK_FALSE(is_contractible(pointed("2; 0>1*2, 1>0*2, 1>1"), 0, 1));
  CHECK_THROWS_AS(contract_edge(pointed("2; 0>1*2, 1>0*2, 1>1"), 0, 1), GraphError);

  const auto stable = pointed("2; 0>1*2, 1>0*2");
  CHECK(stabilize(stable) == stable);
  CHECK_THROWS_AS(stabilize(pointed("2; 0>1, 1>0")), GraphError);
}

TEST_CASE("every strongly connected semistable pointed graph of weight <= 3 stabilizes") {
  for (int w = 1; w <= 3; ++w)
    for (const auto& g : enumerate_pointed_semistable_strong(w)) {
      PointedGraph s;
      REQUIRE_NOTHROW(s = stabilize(g));
      CHECK(is_stable(s));
      CHECK(is_strongly_connected(s));
      CHECK(s.weight() == g.weight());
    }
}

TEST_CASE("redundant edges") {
  CHECK(is_redundant(pointed("1; 0>0"), 0, 0));
  CHECK_FALSE(is_redundant(pointed("2; 0>1, 1>0"), 1, 0));
  CHECK(is_redundant(pointed("2; 0>1*2, 1>0*2"), 1, 0));
  CHECK_THROWS_AS(is_redundant(pointed("2; 0>1, 1>0"), 1, 1), GraphError);
}

TEST_CASE("every strongly connected semistable pointed graph with an ordinary vertex has a redundant edge") {
  for (int w = 1; w <= 4; ++w)
    for (const auto& g : enumerate_pointed_semistable_strong(w)) {
      if (g.vertex_count() < 2) continue;
      bool found = false;
      for (int u = 0; u < g.vertex_count() && !found; ++u)
        for (int v = 0; v < g.vertex_count() && !found; ++v)
          found = g(u, v) > 0 && is_redundant(g, u, v);
      CHECK_MESSAGE(found, to_compact(g));
    }
}

TEST_CASE("components and unions") {
  const auto a = MultiDigraph::from_rows({{2}});
  const auto b = MultiDigraph::from_rows({{1, 1}, {1, 1}});
  const auto u = disjoint_union(a, b);
  CHECK(u.vertex_count() == 3);
  CHECK(component_count(u) == 2);
  const auto parts = connected_components(u);
  REQUIRE(parts.size() == 2);
  std::set<std::string> keys{canonical_form(parts[0]).key, canonical_form(parts[1]).key};
  CHECK(keys == std::set<std::string>{canonical_form(a).key, canonical_form(b).key});
}

TEST_CASE("canonical form and automorphisms on graphs with many interchangeable vertices") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 150; ++trial) {
    // Blow up a small random graph: every vertex gets copies with identical
    // neighbourhoods, then a few random edges break part of the symmetry.
    const auto core = random_graph(rng, 2 + trial % 2, 1);
    std::vector<int> owner;
    for (int v = 0; v < core.vertex_count(); ++v)
      for (int k = 0; k < 1 + (trial + v) % 3; ++k) owner.push_back(v);
    const int n = static_cast<int>(owner.size());
    MultiDigraph g(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) g.add_edges(a, b, core(owner[static_cast<std::size_t>(a)], owner[static_cast<std::size_t>(b)]));
    if (trial % 3 == 0) g.add_edges(coin(rng), n - 1);
    const auto h = shuffled(rng, g, false);
    CHECK(canonical_form(h) == canonical_form(g));
    CHECK(aut_order(g) == brute::aut_order(g, false));
    CHECK(aut_order(PointedGraph(g)) == brute::aut_order(g, true));
    CHECK(canonical_form(PointedGraph(shuffled(rng, g, true))) == canonical_form(PointedGraph(g)));
    CHECK((canonical_form(h) == canonical_form(core)) ==
          (brute::canonical_key(h, false) == brute::canonical_key(core, false)));
  }
}
