#include <doctest.h>

#include <random>

#include "kheat/serialize.hpp"

using namespace kheat;

TEST_CASE("compact form") {
  const auto g = MultiDigraph::from_rows({{0, 2}, {1, 1}});
  CHECK(to_compact(g) == "2; 0>1*2, 1>0*1, 1>1*1");
  CHECK(parse_compact("2; 1>1, 1>0, 0>1*2") == g);
  CHECK(parse_compact("2;1>0,1>1,0>1,0>1") == g);
  CHECK(parse_compact("3;") == MultiDigraph(3));
  CHECK(to_compact(MultiDigraph(3)) == "3;");
}

TEST_CASE("malformed compact input is rejected") {
  for (const char* bad : {"", "x", "2", "2; 0>2", "2; 0>1*0", "2; 0>1,", "2; 0>1 1>0", "-1;", "2; 0-1"})
    CHECK_THROWS_AS(parse_compact(bad), GraphError);
}

TEST_CASE("json form") {
  const PointedGraph g(MultiDigraph::from_rows({{0, 1}, {1, 1}}));
  const auto j = to_json(g);
  CHECK(j.dump() == R"({"edges":[[0,1,1],[1,0,1],[1,1,1]],"pointed":true,"vertices":2})");
  const auto back = graph_from_json(j);
  CHECK(back.pointed);
  CHECK(back.graph == g.graph());
  CHECK_FALSE(graph_from_json(to_json(g.graph())).pointed);
}

TEST_CASE("parse_graph dispatches on the first character") {
  const auto a = parse_graph(R"(  {"vertices": 1, "pointed": true, "edges": [[0, 0, 3]]})");
  CHECK(a.pointed);
  CHECK(a.graph == MultiDigraph::from_rows({{3}}));
  const auto b = parse_graph("1; 0>0*3");
  CHECK_FALSE(b.pointed);
  CHECK(b.graph == a.graph);
  CHECK_THROWS_AS(parse_graph("{\"vertices\": 2}"), GraphError);
  CHECK_THROWS_AS(parse_graph("{\"vertices\": 1, \"edges\": [[0, 1, 1]]}"), GraphError);
  CHECK_THROWS_AS(parse_graph("{\"vertices\": 1, \"edges\": [[0, 0]]}"), GraphError);
  CHECK_THROWS_AS(parse_graph("{\"vertices\": 0, \"pointed\": true, \"edges\": []}"), GraphError);
  CHECK_THROWS_AS(parse_graph("{not json"), GraphError);
}

TEST_CASE("round trips on random graphs") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> mult(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    MultiDigraph g(trial % 6);
    for (int u = 0; u < g.vertex_count(); ++u)
      for (int v = 0; v < g.vertex_count(); ++v) g.add_edges(u, v, mult(rng));
    CHECK(parse_compact(to_compact(g)) == g);
    CHECK(graph_from_json(nlohmann::json::parse(to_json(g).dump())).graph == g);
    CHECK(parse_graph(to_json(g).dump()).graph == g);
  }
}
