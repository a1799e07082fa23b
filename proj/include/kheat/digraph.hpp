#pragma once

// Multi-digraphs with loops, pointed graphs, canonical forms and the edge /
// vertex surgeries used by the phi recursion and the cutting construction.

#include <compare>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kheat/arith.hpp"

namespace kheat {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Largest vertex count accepted by canonical_form / aut_order.
inline constexpr int kMaxCanonicalVertices = 12;

/// Directed multigraph stored as a dense multiplicity matrix; adjacency(u, v)
/// is the number of edges u->v and the diagonal holds loop counts.
class MultiDigraph {
 public:
  MultiDigraph() = default;
  explicit MultiDigraph(int vertex_count);
  MultiDigraph(int vertex_count, std::vector<int> adjacency);
  static MultiDigraph from_rows(std::initializer_list<std::initializer_list<int>> rows);

  int vertex_count() const { return n_; }
  int edge_count() const { return edges_; }
  int weight() const { return edges_ - n_; }

  int operator()(int u, int v) const { return adj_[index(u, v)]; }
  void add_edges(int u, int v, int count = 1);
  void remove_edges(int u, int v, int count = 1);

  const std::vector<int>& adjacency() const { return adj_; }

  friend bool operator==(const MultiDigraph&, const MultiDigraph&) = default;

 private:
  std::size_t index(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw GraphError("vertex index out of range");
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  int edges_ = 0;
  std::vector<int> adj_;
};

/// Multi-digraph with a distinguished vertex, always stored at index 0.
class PointedGraph {
 public:
  PointedGraph() : graph_(1) {}
  explicit PointedGraph(MultiDigraph graph);

  const MultiDigraph& graph() const { return graph_; }
  int vertex_count() const { return graph_.vertex_count(); }
  int ordinary_count() const { return graph_.vertex_count() - 1; }
  int edge_count() const { return graph_.edge_count(); }
  /// |E| minus the number of ordinary vertices.
  int weight() const { return graph_.edge_count() - ordinary_count(); }
  int operator()(int u, int v) const { return graph_(u, v); }

  void add_edges(int u, int v, int count = 1) { graph_.add_edges(u, v, count); }
  void remove_edges(int u, int v, int count = 1) { graph_.remove_edges(u, v, count); }

  static constexpr int kPoint = 0;

  friend bool operator==(const PointedGraph&, const PointedGraph&) = default;

 private:
  MultiDigraph graph_;
};

struct Degrees {
  int out = 0;
  int in = 0;
  friend bool operator==(const Degrees&, const Degrees&) = default;
};

/// Isomorphism-class key. Two graphs share a key iff they are isomorphic
/// (pointed isomorphisms fix the distinguished vertex). The key text is the
/// compact serialization of the canonically relabeled graph, prefixed with
/// '*' for pointed graphs.
struct CanonicalForm {
  std::string key;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

Degrees degrees(const MultiDigraph& g, int v);
Degrees degrees(const PointedGraph& g, int v);

inline int weight(const MultiDigraph& g) { return g.weight(); }
inline int weight(const PointedGraph& g) { return g.weight(); }

bool is_stable(const MultiDigraph& g);
bool is_stable(const PointedGraph& g);
bool is_semistable(const MultiDigraph& g);
bool is_semistable(const PointedGraph& g);

bool is_strongly_connected(const MultiDigraph& g);
bool is_strongly_connected(const PointedGraph& g);

/// Number of weakly connected components.
int component_count(const MultiDigraph& g);
std::vector<MultiDigraph> connected_components(const MultiDigraph& g);
MultiDigraph disjoint_union(const MultiDigraph& a, const MultiDigraph& b);

/// Relabel so that new vertex i is old vertex order[i].
MultiDigraph relabeled(const MultiDigraph& g, const std::vector<int>& order);

CanonicalForm canonical_form(const MultiDigraph& g);
CanonicalForm canonical_form(const PointedGraph& g);
/// The canonical representative (the graph the key serializes).
MultiDigraph canonical_graph(const MultiDigraph& g);
PointedGraph canonical_graph(const PointedGraph& g);

/// Adjacency-preserving vertex permutations (fixing the point for pointed
/// graphs) times the product of multiplicity factorials over all ordered
/// pairs, i.e. parallel edges and loops are individually permutable.
Integer aut_order(const MultiDigraph& g);
Integer aut_order(const PointedGraph& g);
/// Only the vertex-permutation factor.
Integer vertex_automorphism_count(const MultiDigraph& g);
Integer vertex_automorphism_count(const PointedGraph& g);

MultiDigraph delete_edge(const MultiDigraph& g, int u, int v);
PointedGraph delete_edge(const PointedGraph& g, int u, int v);

/// Smoothing removes an ordinary loop-free vertex of degree (1,1) and joins
/// its two neighbours.
bool is_smoothable(const PointedGraph& g, int v);
PointedGraph smooth_vertex(const PointedGraph& g, int v);
/// Smooths until no smoothable vertex is left; the result does not depend on
/// the order of the smoothings.
PointedGraph smooth_all(const PointedGraph& g);

bool is_contractible(const PointedGraph& g, int u, int v);
PointedGraph contract_edge(const PointedGraph& g, int u, int v);
/// Contracts contractible edges until the graph is stable. Throws GraphError
/// when the input is not semistable or the process gets stuck.
PointedGraph stabilize(const PointedGraph& g);

/// True iff deleting one copy of u->v keeps the graph strongly connected.
bool is_redundant(const PointedGraph& g, int u, int v);

}  // namespace kheat
