#include "kheat/digraph.hpp"

#include <algorithm>
#include <numeric>

#include "kheat/serialize.hpp"

namespace kheat {

MultiDigraph::MultiDigraph(int vertex_count) : n_(vertex_count) {
  if (vertex_count < 0) throw GraphError("negative vertex count");
  adj_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
}

MultiDigraph::MultiDigraph(int vertex_count, std::vector<int> adjacency)
    : n_(vertex_count), adj_(std::move(adjacency)) {
  if (vertex_count < 0) throw GraphError("negative vertex count");
  if (adj_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
    throw GraphError("adjacency matrix has wrong size");
  for (int m : adj_) {
    if (m < 0) throw GraphError("negative edge multiplicity");
    edges_ += m;
  }
}

MultiDigraph MultiDigraph::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> adj;
  adj.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) throw GraphError("adjacency matrix is not square");
    adj.insert(adj.end(), row.begin(), row.end());
  }
  return MultiDigraph(n, std::move(adj));
}

void MultiDigraph::add_edges(int u, int v, int count) {
  if (count < 0) throw GraphError("negative edge count");
  adj_[index(u, v)] += count;
  edges_ += count;
}

void MultiDigraph::remove_edges(int u, int v, int count) {
  auto& m = adj_[index(u, v)];
  if (count < 0 || m < count) throw GraphError("removing a non-existent edge");
  m -= count;
  edges_ -= count;
}

PointedGraph::PointedGraph(MultiDigraph graph) : graph_(std::move(graph)) {
  if (graph_.vertex_count() < 1) throw GraphError("pointed graph needs the distinguished vertex");
}

Degrees degrees(const MultiDigraph& g, int v) {
  if (v < 0 || v >= g.vertex_count()) throw GraphError("vertex index out of range");
  Degrees d;
  for (int w = 0; w < g.vertex_count(); ++w) {
    d.out += g(v, w);
    d.in += g(w, v);
  }
  return d;
}

Degrees degrees(const PointedGraph& g, int v) { return degrees(g.graph(), v); }

namespace {

bool vertex_stable(Degrees d) { return d.in >= 2 && d.out >= 2; }
bool vertex_semistable(Degrees d) { return d.in >= 1 && d.out >= 1 && d.in + d.out >= 3; }

template <typename Pred>
bool all_vertices(const MultiDigraph& g, int first, Pred pred) {
  for (int v = first; v < g.vertex_count(); ++v)
    if (!pred(degrees(g, v))) return false;
  return true;
}

// Reachability from vertex 0 along edges (forward) or against them.
int reach_count(const MultiDigraph& g, bool forward) {
  const int n = g.vertex_count();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      const int m = forward ? g(u, w) : g(w, u);
      if (m > 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count;
}

}  // namespace

bool is_stable(const MultiDigraph& g) { return all_vertices(g, 0, vertex_stable); }
bool is_stable(const PointedGraph& g) { return all_vertices(g.graph(), 1, vertex_stable); }
bool is_semistable(const MultiDigraph& g) { return all_vertices(g, 0, vertex_semistable); }
bool is_semistable(const PointedGraph& g) { return all_vertices(g.graph(), 1, vertex_semistable); }

bool is_strongly_connected(const MultiDigraph& g) {
  const int n = g.vertex_count();
  if (n <= 1) return true;
  return reach_count(g, true) == n && reach_count(g, false) == n;
}

bool is_strongly_connected(const PointedGraph& g) { return is_strongly_connected(g.graph()); }

namespace {

std::vector<int> component_labels(const MultiDigraph& g) {
  const int n = g.vertex_count();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g(u, v) > 0) parent[static_cast<std::size_t>(find(u))] = find(v);
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (root_label[static_cast<std::size_t>(r)] < 0) root_label[static_cast<std::size_t>(r)] = next++;
    label[static_cast<std::size_t>(v)] = root_label[static_cast<std::size_t>(r)];
  }
  return label;
}

}  // namespace

int component_count(const MultiDigraph& g) {
  const auto labels = component_labels(g);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

std::vector<MultiDigraph> connected_components(const MultiDigraph& g) {
  const auto labels = component_labels(g);
  std::vector<MultiDigraph> out;
  const int count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  for (int c = 0; c < count; ++c) {
    std::vector<int> members;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (labels[static_cast<std::size_t>(v)] == c) members.push_back(v);
    out.push_back(relabeled(g, members));
  }
  return out;
}

MultiDigraph disjoint_union(const MultiDigraph& a, const MultiDigraph& b) {
  const int na = a.vertex_count();
  MultiDigraph out(na + b.vertex_count());
  for (int u = 0; u < na; ++u)
    for (int v = 0; v < na; ++v)
      if (a(u, v)) out.add_edges(u, v, a(u, v));
  for (int u = 0; u < b.vertex_count(); ++u)
    for (int v = 0; v < b.vertex_count(); ++v)
      if (b(u, v)) out.add_edges(na + u, na + v, b(u, v));
  return out;
}

MultiDigraph relabeled(const MultiDigraph& g, const std::vector<int>& order) {
  const int k = static_cast<int>(order.size());
  MultiDigraph out(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int m = g(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
      if (m) out.add_edges(i, j, m);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical labeling: colour refinement followed by a pruned search for the
// lexicographically least matrix over colour-respecting orderings. The entry
// order grows a square from the top-left corner so that every prefix is fixed
// once the corresponding positions are.

namespace {

std::vector<int> refine_colors(const MultiDigraph& g, bool pointed) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const auto d = degrees(g, v);
    sig[static_cast<std::size_t>(v)] = {(pointed && v == 0) ? 0 : 1, d.out, d.in, g(v, v)};
  }
  auto rank = [&](const std::vector<std::vector<int>>& s) {
    std::vector<std::vector<int>> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> colors(s.size());
    for (std::size_t v = 0; v < s.size(); ++v)
      colors[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), s[v]) - sorted.begin());
    return std::make_pair(colors, static_cast<int>(sorted.size()));
  };
  auto [colors, classes] = rank(sig);
  while (true) {
    for (int v = 0; v < n; ++v) {
      std::vector<std::pair<int, int>> out_nb, in_nb;
      for (int w = 0; w < n; ++w) {
        if (w == v) continue;
        if (g(v, w)) out_nb.emplace_back(colors[static_cast<std::size_t>(w)], g(v, w));
        if (g(w, v)) in_nb.emplace_back(colors[static_cast<std::size_t>(w)], g(w, v));
      }
      std::sort(out_nb.begin(), out_nb.end());
      std::sort(in_nb.begin(), in_nb.end());
      auto& s = sig[static_cast<std::size_t>(v)];
      s = {colors[static_cast<std::size_t>(v)], static_cast<int>(out_nb.size())};
      for (auto [c, m] : out_nb) {
        s.push_back(c);
        s.push_back(m);
      }
      s.push_back(-1);
      for (auto [c, m] : in_nb) {
        s.push_back(c);
        s.push_back(m);
      }
    }
    auto [next, next_classes] = rank(sig);
    if (next_classes == classes) break;
    colors = std::move(next);
    classes = next_classes;
  }
  return colors;
}

struct CanonicalSearch {
  const MultiDigraph& g;
  int n;
  std::vector<int> slot_color;  // colour required at each position
  std::vector<int> color;
  std::vector<int> order;
  std::vector<char> used;
  std::vector<int> seq;
  std::vector<int> best_seq;
  std::vector<int> best_order;
  Integer automorphisms = 0;
  long improvements = 0;

  CanonicalSearch(const MultiDigraph& graph, bool pointed)
      : g(graph), n(graph.vertex_count()), color(refine_colors(graph, pointed)) {
    slot_color = color;
    std::sort(slot_color.begin(), slot_color.end());
    order.assign(static_cast<std::size_t>(n), -1);
    used.assign(static_cast<std::size_t>(n), 0);
  }

  // Swapping a and b is an automorphism.
  bool twins(int a, int b) const {
    if (g(a, a) != g(b, b) || g(a, b) != g(b, a)) return false;
    for (int x = 0; x < n; ++x) {
      if (x == a || x == b) continue;
      if (g(a, x) != g(b, x) || g(x, a) != g(x, b)) return false;
    }
    return true;
  }

  void run() {
    if (n > kMaxCanonicalVertices)
      throw GraphError("graph exceeds the canonical-form vertex bound of " +
                       std::to_string(kMaxCanonicalVertices));
    seq.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    descend(0, 0);
  }

  // cmp: 0 = prefix equal to best so far, -1 = strictly smaller.
  void descend(int pos, int cmp) {
    if (pos == n) {
      if (best_order.empty() || cmp < 0) {
        best_seq = seq;
        best_order = order;
        automorphisms = 1;
        ++improvements;
      } else {
        automorphisms += 1;
      }
      return;
    }
    // Interchangeable vertices give mirror subtrees: explore one per class
    // and scale its automorphism count.
    std::vector<int> reps, sizes;
    for (int v = 0; v < n; ++v) {
      if (used[static_cast<std::size_t>(v)] || color[static_cast<std::size_t>(v)] != slot_color[static_cast<std::size_t>(pos)]) continue;
      bool placed = false;
      for (std::size_t r = 0; r < reps.size() && !placed; ++r)
        if (twins(reps[r], v)) {
          ++sizes[r];
          placed = true;
        }
      if (!placed) {
        reps.push_back(v);
        sizes.push_back(1);
      }
    }
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const int v = reps[r];
      const std::size_t mark = seq.size();
      order[static_cast<std::size_t>(pos)] = v;
      for (int q = 0; q < pos; ++q) {
        seq.push_back(g(v, order[static_cast<std::size_t>(q)]));
        seq.push_back(g(order[static_cast<std::size_t>(q)], v));
      }
      seq.push_back(g(v, v));
      int c = cmp;
      if (c == 0 && !best_order.empty()) {
        for (std::size_t i = mark; i < seq.size(); ++i) {
          if (seq[i] != best_seq[i]) {
            c = seq[i] < best_seq[i] ? -1 : 1;
            break;
          }
        }
      }
      if (c <= 0) {
        used[static_cast<std::size_t>(v)] = 1;
        const long before = improvements;
        const Integer count_before = automorphisms;
        descend(pos + 1, c);
        used[static_cast<std::size_t>(v)] = 0;
        // A new best below shares our prefix, so siblings compare as equal.
        const Integer base = improvements != before ? Integer(0) : count_before;
        if (improvements != before) cmp = 0;
        automorphisms = base + (automorphisms - base) * sizes[r];
      }
      seq.resize(mark);
    }
  }
};

}  // namespace

MultiDigraph canonical_graph(const MultiDigraph& g) {
  CanonicalSearch search(g, false);
  search.run();
  return relabeled(g, search.best_order);
}

PointedGraph canonical_graph(const PointedGraph& g) {
  CanonicalSearch search(g.graph(), true);
  search.run();
  return PointedGraph(relabeled(g.graph(), search.best_order));
}

CanonicalForm canonical_form(const MultiDigraph& g) { return {to_compact(canonical_graph(g))}; }

CanonicalForm canonical_form(const PointedGraph& g) {
  return {"*" + to_compact(canonical_graph(g).graph())};
}

namespace {

Integer multiplicity_factor(const MultiDigraph& g) {
  Integer f = 1;
  for (int m : g.adjacency())
    if (m > 1) f *= factorial(m);
  return f;
}

}  // namespace

Integer vertex_automorphism_count(const MultiDigraph& g) {
  CanonicalSearch search(g, false);
  search.run();
  return search.automorphisms == 0 ? Integer(1) : search.automorphisms;
}

Integer vertex_automorphism_count(const PointedGraph& g) {
  CanonicalSearch search(g.graph(), true);
  search.run();
  return search.automorphisms;
}

Integer aut_order(const MultiDigraph& g) { return vertex_automorphism_count(g) * multiplicity_factor(g); }

Integer aut_order(const PointedGraph& g) {
  return vertex_automorphism_count(g) * multiplicity_factor(g.graph());
}

// ---------------------------------------------------------------------------
// Surgeries

MultiDigraph delete_edge(const MultiDigraph& g, int u, int v) {
  MultiDigraph out = g;
  out.remove_edges(u, v, 1);
  return out;
}

PointedGraph delete_edge(const PointedGraph& g, int u, int v) {
  PointedGraph out = g;
  out.remove_edges(u, v, 1);
  return out;
}

namespace {

// Drops vertex `gone` (which must have no incident edges left).
MultiDigraph without_vertex(const MultiDigraph& g, int gone) {
  std::vector<int> keep;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (v != gone) keep.push_back(v);
  return relabeled(g, keep);
}

}  // namespace

bool is_smoothable(const PointedGraph& g, int v) {
  if (v <= 0 || v >= g.vertex_count()) return false;
  const auto d = degrees(g, v);
  return d.out == 1 && d.in == 1 && g(v, v) == 0;
}

PointedGraph smooth_vertex(const PointedGraph& g, int v) {
  if (!is_smoothable(g, v))
    throw GraphError("smoothing requires an ordinary loop-free vertex of degree (1,1)");
  int from = -1, to = -1;
  for (int w = 0; w < g.vertex_count(); ++w) {
    if (g(w, v)) from = w;
    if (g(v, w)) to = w;
  }
  MultiDigraph h = g.graph();
  h.remove_edges(from, v);
  h.remove_edges(v, to);
  h.add_edges(from, to);
  return PointedGraph(without_vertex(h, v));
}

PointedGraph smooth_all(const PointedGraph& g) {
  PointedGraph h = g;
  for (int v = 1; v < h.vertex_count();) {
    if (is_smoothable(h, v)) {
      h = smooth_vertex(h, v);
      v = 1;
    } else {
      ++v;
    }
  }
  return h;
}

bool is_contractible(const PointedGraph& g, int u, int v) {
  if (u == v || g(u, v) == 0) return false;
  const bool via_tail = u != PointedGraph::kPoint && degrees(g, u).out == 1;
  const bool via_head = v != PointedGraph::kPoint && degrees(g, v).in == 1;
  return via_tail || via_head;
}

PointedGraph contract_edge(const PointedGraph& g, int u, int v) {
  if (!is_contractible(g, u, v)) throw GraphError("edge is not contractible");
  const int keep = (u == PointedGraph::kPoint || v == PointedGraph::kPoint) ? PointedGraph::kPoint : std::min(u, v);
  const int gone = keep == u ? v : u;
  MultiDigraph h = g.graph();
  h.remove_edges(u, v);
  const int n = h.vertex_count();
  for (int w = 0; w < n; ++w) {
    const int out_m = h(gone, w);
    if (out_m) {
      h.remove_edges(gone, w, out_m);
      h.add_edges(keep, w == gone ? keep : w, out_m);
    }
  }
  for (int w = 0; w < n; ++w) {
    const int in_m = h(w, gone);
    if (in_m) {
      h.remove_edges(w, gone, in_m);
      h.add_edges(w == gone ? keep : w, keep, in_m);
    }
  }
  return PointedGraph(without_vertex(h, gone));
}

PointedGraph stabilize(const PointedGraph& g) {
  if (!is_semistable(g)) throw GraphError("stabilization requires a semistable graph");
  PointedGraph h = g;
  while (!is_stable(h)) {
    bool contracted = false;
    for (int u = 0; u < h.vertex_count() && !contracted; ++u)
      for (int v = 0; v < h.vertex_count() && !contracted; ++v)
        if (is_contractible(h, u, v)) {
          h = contract_edge(h, u, v);
          contracted = true;
        }
    if (!contracted) throw GraphError("graph is not stabilizable");
  }
  return h;
}

bool is_redundant(const PointedGraph& g, int u, int v) {
  if (g(u, v) == 0) throw GraphError("edge is absent");
  return is_strongly_connected(delete_edge(g, u, v));
}

}  // namespace kheat
