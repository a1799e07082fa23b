#include "kheat/enumerate.hpp"

#include <omp.h>

#include <functional>
#include <type_traits>

#include "kheat/serialize.hpp"

namespace kheat {

namespace {

enum class VertexRule { Stable, Semistable };

struct Request {
  bool pointed = false;
  int weight = 0;
  VertexRule rule = VertexRule::Stable;
  bool strong = false;
};

// One stratum: a fixed vertex count and a fixed (out, in) degree per vertex.
// Ordinary vertices carry non-increasing degree pairs; every isomorphism
// class has a representative whose ordinary vertices are sorted that way.
struct Stratum {
  int vertices = 0;
  std::vector<int> out;
  std::vector<int> in;
};

bool admissible(VertexRule rule, int out, int in) {
  if (rule == VertexRule::Stable) return out >= 2 && in >= 2;
  return out >= 1 && in >= 1 && out + in >= 3;
}

std::vector<Stratum> make_strata(const Request& req) {
  std::vector<Stratum> strata;
  const int w = req.weight;
  const int min_ordinary = req.pointed ? 0 : 1;
  const int max_ordinary = req.rule == VertexRule::Stable ? w : 2 * w;
  const int min_deg = req.rule == VertexRule::Stable ? 2 : 1;
  for (int o = min_ordinary; o <= max_ordinary; ++o) {
    const int edges = w + o;
    if (edges < 0) continue;
    std::vector<std::pair<int, int>> seq;
    std::function<void(int, int)> extend = [&](int sum_out, int sum_in) {
      if (static_cast<int>(seq.size()) == o) {
        Stratum s;
        s.vertices = o + (req.pointed ? 1 : 0);
        if (req.pointed) {
          const int out0 = edges - sum_out, in0 = edges - sum_in;
          if (out0 < 0 || in0 < 0) return;
          if (req.strong && o > 0 && (out0 < 1 || in0 < 1)) return;
          s.out.push_back(out0);
          s.in.push_back(in0);
        } else if (sum_out != edges || sum_in != edges) {
          return;
        }
        for (auto [a, b] : seq) {
          s.out.push_back(a);
          s.in.push_back(b);
        }
        strata.push_back(std::move(s));
        return;
      }
      const int left = o - static_cast<int>(seq.size()) - 1;
      for (int a = min_deg; sum_out + a + left * min_deg <= edges; ++a)
        for (int b = min_deg; sum_in + b + left * min_deg <= edges; ++b) {
          if (!seq.empty() && std::make_pair(a, b) > seq.back()) continue;
          if (!admissible(req.rule, a, b)) continue;
          seq.emplace_back(a, b);
          extend(sum_out + a, sum_in + b);
          seq.pop_back();
        }
    };
    extend(0, 0);
  }
  return strata;
}

// Visits every non-negative integer matrix with the given row and column sums.
class MatrixWalker {
 public:
  MatrixWalker(const Stratum& s, std::function<void(const std::vector<int>&)> visit)
      : n_(s.vertices), row_(s.out), col_(s.in), visit_(std::move(visit)) {
    cells_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
  }

  void run() {
    if (n_ == 0) {
      visit_(cells_);
      return;
    }
    step(0, 0);
  }

 private:
  void step(int i, int j) {
    if (i == n_) {
      visit_(cells_);
      return;
    }
    const int ni = j + 1 == n_ ? i + 1 : i;
    const int nj = j + 1 == n_ ? 0 : j + 1;
    auto& r = row_[static_cast<std::size_t>(i)];
    auto& c = col_[static_cast<std::size_t>(j)];
    int lo = 0, hi = std::min(r, c);
    if (j + 1 == n_) lo = r;             // last column absorbs the row remainder
    if (i + 1 == n_) lo = std::max(lo, c);  // last row absorbs the column remainder
    if (lo > hi) return;
    int rest_cols = 0;
    for (int k = j + 1; k < n_; ++k) rest_cols += col_[static_cast<std::size_t>(k)];
    for (int x = lo; x <= hi; ++x) {
      if (r - x > rest_cols) continue;
      r -= x;
      c -= x;
      cells_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = x;
      step(ni, nj);
      cells_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = 0;
      r += x;
      c += x;
    }
  }

  int n_;
  std::vector<int> row_, col_;
  std::vector<int> cells_;
  std::function<void(const std::vector<int>&)> visit_;
};

thread_local long long g_last_candidates = 0;

template <typename Graph>
struct StratumResult {
  std::map<std::string, Graph> classes;
  long long candidates = 0;
};

template <typename Graph>
StratumResult<Graph> walk_stratum(const Request& req, const Stratum& s) {
  StratumResult<Graph> out;
  MatrixWalker walker(s, [&](const std::vector<int>& cells) {
    ++out.candidates;
    MultiDigraph g(s.vertices, cells);
    if (req.strong && !is_strongly_connected(g)) return;
    if constexpr (std::is_same_v<Graph, PointedGraph>) {
      PointedGraph rep = canonical_graph(PointedGraph(std::move(g)));
      out.classes.emplace("*" + to_compact(rep.graph()), std::move(rep));
    } else {
      MultiDigraph rep = canonical_graph(g);
      out.classes.emplace(to_compact(rep), std::move(rep));
    }
  });
  walker.run();
  return out;
}

template <typename Graph>
std::vector<Graph> collect(std::vector<StratumResult<Graph>>& results) {
  std::map<std::string, Graph> merged;
  long long candidates = 0;
  for (auto& r : results) {
    candidates += r.candidates;
    merged.merge(r.classes);
  }
  g_last_candidates = candidates;
  std::vector<Graph> out;
  out.reserve(merged.size());
  for (auto& [key, g] : merged) out.push_back(std::move(g));
  return out;
}

template <typename Graph>
std::vector<Graph> run_parallel(const Request& req) {
  const auto strata = make_strata(req);
  std::vector<StratumResult<Graph>> results(strata.size());
  const long long count = static_cast<long long>(strata.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i)
    results[static_cast<std::size_t>(i)] = walk_stratum<Graph>(req, strata[static_cast<std::size_t>(i)]);
  return collect(results);
}

template <typename Graph>
std::vector<Graph> run_serial(const Request& req) {
  const auto strata = make_strata(req);
  std::vector<StratumResult<Graph>> results;
  results.reserve(strata.size());
  for (const auto& s : strata) results.push_back(walk_stratum<Graph>(req, s));
  return collect(results);
}

void check_bound(int n, int bound, const char* what) {
  if (n < 1 || n > bound)
    throw std::out_of_range(std::string(what) + ": weight " + std::to_string(n) + " outside [1, " +
                            std::to_string(bound) + "]");
}

Request stable_request(int n) { return {false, n, VertexRule::Stable, false}; }
Request pointed_stable_request(int k) { return {true, k, VertexRule::Stable, true}; }
Request pointed_semistable_request(int w) { return {true, w, VertexRule::Semistable, true}; }

constexpr int kSemistableWeightBound = 4;

}  // namespace

std::vector<MultiDigraph> enumerate_stable(int n, int bound) {
  check_bound(n, bound, "enumerate_stable");
  return run_parallel<MultiDigraph>(stable_request(n));
}

std::vector<PointedGraph> enumerate_pointed_stable_strong(int k, int bound) {
  check_bound(k, bound, "enumerate_pointed_stable_strong");
  return run_parallel<PointedGraph>(pointed_stable_request(k));
}

std::vector<PointedGraph> enumerate_pointed_semistable_strong(int w) {
  check_bound(w, kSemistableWeightBound, "enumerate_pointed_semistable_strong");
  return run_parallel<PointedGraph>(pointed_semistable_request(w));
}

long long last_enumeration_candidates() { return g_last_candidates; }

namespace serial {

std::vector<MultiDigraph> enumerate_stable(int n, int bound) {
  check_bound(n, bound, "enumerate_stable");
  return run_serial<MultiDigraph>(stable_request(n));
}

std::vector<PointedGraph> enumerate_pointed_stable_strong(int k, int bound) {
  check_bound(k, bound, "enumerate_pointed_stable_strong");
  return run_serial<PointedGraph>(pointed_stable_request(k));
}

std::vector<PointedGraph> enumerate_pointed_semistable_strong(int w) {
  check_bound(w, kSemistableWeightBound, "enumerate_pointed_semistable_strong");
  return run_serial<PointedGraph>(pointed_semistable_request(w));
}

}  // namespace serial

GraphSum<PointedGraph> laplacian_power(int k, PhiCache& cache, int bound) {
  GraphSum<PointedGraph> sum;
  for (const auto& g : enumerate_pointed_stable_strong(k, bound)) {
    Rational c(phi(g, cache) * sign_power(g.vertex_count() - 1), aut_order(g));
    c.canonicalize();
    sum.add(g, c);
  }
  return sum;
}

}  // namespace kheat
