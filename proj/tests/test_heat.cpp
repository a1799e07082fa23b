#include <doctest.h>

#include "kheat/heat.hpp"
#include "kheat/serialize.hpp"
#include "support/brute.hpp"

using namespace kheat;

namespace {

MultiDigraph graph(const char* compact) { return parse_compact(compact); }

Rational ratio(const Integer& a, const Integer& b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

// Cuts an explicit subset of the edge list: every chosen u->v becomes
// u->point->v, with the point prepended as vertex 0.
PointedGraph cut_subset(const brute::EdgeList& e, unsigned mask) {
  MultiDigraph h(e.vertices + 1);
  for (std::size_t i = 0; i < e.edges.size(); ++i) {
    const auto [u, v] = e.edges[i];
    if (mask >> i & 1u) {
      h.add_edges(u + 1, 0);
      h.add_edges(0, v + 1);
    } else {
      h.add_edges(u + 1, v + 1);
    }
  }
  return PointedGraph(h);
}

// z summed over all 2^|E| edge subsets, with automorphisms counted by brute force.
Rational z_by_subsets(const MultiDigraph& g, PhiCache& cache) {
  const auto e = brute::edge_list(g);
  const int w = g.weight();
  Rational sum = 0;
  for (unsigned mask = 0; mask < (1u << e.edges.size()); ++mask) {
    const int m = __builtin_popcount(mask);
    sum += ratio(phi(cut_subset(e, mask), cache) * sign_power(m), factorial(m + w));
  }
  Integer two_w = 1;
  for (int i = 0; i < w; ++i) two_w *= 2;
  return sum * ratio(two_w * sign_power(g.vertex_count()), brute::aut_order(g, false));
}

}  // namespace

TEST_CASE("cuttings") {
  const auto g = graph("2; 0>1*2, 1>0, 1>1*3");
  const auto cs = cuttings(g);
  CHECK(cs.size() == 3 * 2 * 4);
  Integer mass = 0;
  for (const auto& c : cs) {
    mass += c.multiplicity();
    const auto gamma = gamma_of_cutting(g, c);
    CHECK(gamma.vertex_count() == g.vertex_count() + 1);
    CHECK(gamma.edge_count() == g.edge_count() + c.cut_count());
    CHECK(gamma.weight() == g.weight() + c.cut_count());
    CHECK(degrees(gamma, 0).in == c.cut_count());
    CHECK(degrees(gamma, 0).out == c.cut_count());
  }
  CHECK(mass == 64);
  CHECK(cuttings(MultiDigraph(2)).size() == 1);
}

TEST_CASE("a cut loop becomes a two-cycle through the point") {
  const auto g = graph("1; 0>0*2");
  Cutting one;
  one.entries.push_back({0, 0, 2, 1});
  CHECK(one.multiplicity() == 2);
  CHECK(gamma_of_cutting(g, one) == PointedGraph(graph("2; 0>1, 1>0, 1>1")));
  Cutting bad;
  bad.entries.push_back({0, 0, 2, 3});
  CHECK_THROWS(gamma_of_cutting(g, bad));
}

TEST_CASE("z of the weight-one and weight-two graphs") {
  PhiCache cache;
  CHECK(z_coefficient(graph("1; 0>0*2"), cache) == Rational(-1, 3));
  CHECK(z_coefficient(graph("1; 0>0*3"), cache) == Rational(-2, 15));
  CHECK(z_coefficient(graph("2; 0>0*2, 1>1*2"), cache) == Rational(1, 18));
  CHECK(z_coefficient(graph("2; 0>0, 0>1, 1>0, 1>1"), cache) == Rational(23, 90));
  CHECK(z_coefficient(graph("2; 0>1*2, 1>0*2"), cache) == Rational(7, 45));
  CHECK(z_coefficient(graph("1; 0>0*2")) == Rational(-1, 3));
}

TEST_CASE("z agrees with a sum over explicit edge subsets") {
  PhiCache cache;
  for (int w = 1; w <= 3; ++w)
    for (const auto& g : enumerate_stable(w)) {
      CAPTURE(to_compact(g));
      CHECK(z_coefficient(g, cache) == z_by_subsets(g, cache));
    }
  // Unstable inputs are still well defined.
  CHECK(z_coefficient(graph("2; 0>1, 1>0, 1>1"), cache) == z_by_subsets(graph("2; 0>1, 1>0, 1>1"), cache));
  CHECK(z_coefficient(graph("1; 0>0"), cache) == z_by_subsets(graph("1; 0>0"), cache));
}

TEST_CASE("serial and parallel z agree") {
  PhiCache a, b;
  for (int w = 1; w <= 3; ++w)
    for (const auto& g : enumerate_stable(w)) CHECK(serial::z_coefficient(g, a) == z_coefficient(g, b));
  for (int w = 1; w <= 3; ++w) CHECK(serial::heat_coefficient(w, a) == heat_coefficient(w, b));
}

TEST_CASE("z is multiplicative over components up to symmetry") {
  PhiCache cache;
  const auto dot2 = graph("1; 0>0*2");
  const Rational z2 = z_coefficient(dot2, cache);
  const auto tau1 = tau_graph(1);
  CHECK(z_coefficient(tau1, cache) == z2 * z2 * z2 / 6);
  CHECK(z_coefficient(tau1, cache) == Rational(-1, 162));
  CHECK(z_from_components(tau1, cache) == z_coefficient(tau1, cache));
  const auto mixed = disjoint_union(dot2, graph("1; 0>0*3"));
  CHECK(z_from_components(mixed, cache) == z_coefficient(mixed, cache));
  CHECK(z_coefficient(mixed, cache) == z2 * Rational(-2, 15));
}

TEST_CASE("heat coefficients") {
  PhiCache cache;
  const auto a1 = heat_coefficient(1, cache);
  REQUIRE(a1.size() == 1);
  CHECK(a1.coefficient(graph("1; 0>0*2")) == Rational(-1, 3));
  CHECK(heat_coefficient(2, cache).size() == 4);
  CHECK(heat_coefficient(3, cache).size() == 15);
  CHECK_THROWS_AS(heat_coefficient(0, cache), std::out_of_range);
}

TEST_CASE("pairings") {
  const auto gamma = PointedGraph(graph("3; 0>1, 0>2, 1>0, 2>0, 1>1, 2>2"));
  const auto ps = pairings(gamma);
  CHECK(ps.size() == 2);
  std::set<CanonicalForm> results;
  for (const auto& p : ps) {
    CHECK(p.graph.vertex_count() == 2);
    CHECK(p.graph.edge_count() == gamma.edge_count() - 2);
    results.insert(canonical_form(p.graph));
  }
  CHECK(results.count(canonical_form(graph("2; 0>0*2, 1>1*2"))) == 1);
  CHECK(results.count(canonical_form(graph("2; 0>0, 0>1, 1>0, 1>1"))) == 1);
  CHECK(pairings(PointedGraph(graph("2; 0>1*3, 1>0*3"))).size() == 6);
  CHECK_THROWS(pairings(PointedGraph(graph("1; 0>0"))));
  CHECK_THROWS(pairings(PointedGraph(graph("2; 0>1*2, 1>0"))));
}

TEST_CASE("pairing and cutting counts are dual") {
  const auto g = graph("2; 0>1*2, 1>0*2");
  const auto gamma = PointedGraph(graph("3; 0>1, 1>0, 0>2, 2>1, 1>2"));
  const auto check = verify_pairing_cutting_duality(gamma, g);
  CHECK(check.holds());
  for (int w = 1; w <= 2; ++w)
    for (const auto& h : enumerate_stable(w))
      for (const auto& c : cuttings(h)) {
        const auto gc = gamma_of_cutting(h, c);
        if (c.cut_count() == 0 || gc(0, 0) > 0) continue;
        for (const auto& other : enumerate_stable(w)) CHECK(verify_pairing_cutting_duality(gc, other).holds());
        CHECK(verify_pairing_cutting_duality(gc, h).cutting_side > 0);
      }
}

TEST_CASE("duality sides for the double two-cycle") {
  // Cutting one edge of each direction of 0<=>1 (doubled) gives the pointed
  // graph in which the point relays one copy each way.
  const auto g = graph("2; 0>1*2, 1>0*2");
  const auto gamma = PointedGraph(graph("3; 0>1, 0>2, 1>0, 1>2, 2>0, 2>1"));
  const auto check = verify_pairing_cutting_duality(gamma, g);
  CHECK(check.cutting_side == Rational(1, 2));
  CHECK(check.pairing_side == Rational(1, 2));
}

TEST_CASE("the weight-three basis") {
  std::set<CanonicalForm> keys;
  for (int i = 1; i <= kSigmaCount; ++i) {
    const auto g = tau_graph(i);
    CHECK(is_stable(g));
    CHECK(g.weight() == 3);
    CHECK(tau_index(g) == i);
    keys.insert(canonical_form(g));
  }
  CHECK(keys.size() == 15);
  for (const auto& g : enumerate_stable(3)) CHECK(tau_index(g).has_value());
  CHECK_FALSE(tau_index(graph("1; 0>0*2")).has_value());
  CHECK_THROWS_AS(tau_graph(0), std::out_of_range);
  CHECK_THROWS_AS(tau_graph(16), std::out_of_range);
  CHECK(tau_sigma_row(14)[13] == -1);
}

TEST_CASE("tau to sigma conversion") {
  GraphSum<MultiDigraph> single;
  single.add(tau_graph(1), 1);
  const auto s = tau_to_sigma(single);
  CHECK(s[0] == -1);
  for (int j = 1; j < kSigmaCount; ++j) CHECK(s[static_cast<std::size_t>(j)] == 0);

  GraphSum<MultiDigraph> zero;
  for (const auto& x : tau_to_sigma(zero)) CHECK(x == 0);

  GraphSum<MultiDigraph> foreign;
  foreign.add(graph("1; 0>0*2"), 1);
  CHECK_THROWS_AS(tau_to_sigma(foreign), std::invalid_argument);
}

TEST_CASE("rendering") {
  PhiCache cache;
  CHECK(render(heat_coefficient(1, cache), Format::Text, 1) == "-1/3 g_{i ibar j jbar}");
  CHECK(render(heat_coefficient(1, cache), Format::Latex, 1) == "a_{1} = -\\frac{1}{3} g_{i\\bar i j\\bar j}");
  CHECK(render(GraphSum<MultiDigraph>{}, Format::Text, 2) == "0");
  CHECK(tensor_notation(graph("2; 0>1*2, 1>0*2"), Format::Text) == "g_{i kbar j lbar} g_{k ibar l jbar}");

  const auto a2 = heat_coefficient(2, cache);
  CHECK(graph_sum_from_json(render(a2, Format::Json, 2)) == a2);
  const auto j = nlohmann::json::parse(render(a2, Format::Json, 2));
  CHECK(j.at("weight") == 2);
  CHECK(j.at("terms").size() == 4);

  const auto sigma = tau_to_sigma(heat_coefficient(3, cache));
  const auto text = render(sigma, Format::Text);
  CHECK(text.rfind("1/162 sigma_1 - 1/270 sigma_2", 0) == 0);
  CHECK(nlohmann::json::parse(render(sigma, Format::Json)).at("coefficients").size() == 15);
}

TEST_CASE("format names") {
  CHECK(parse_format("text") == Format::Text);
  CHECK(parse_format("json") == Format::Json);
  CHECK(parse_format("latex") == Format::Latex);
  CHECK_THROWS_AS(parse_format("yaml"), std::invalid_argument);
}
