#pragma once

// Enumeration of stable graphs up to isomorphism and the expansion of powers
// of the complex Laplacian as a sum over pointed graphs.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kheat/arith.hpp"
#include "kheat/digraph.hpp"
#include "kheat/phi.hpp"

namespace kheat {

inline constexpr int kDefaultStableWeightBound = 4;
inline constexpr int kDefaultPointedWeightBound = 5;

/// Formal linear combination of isomorphism classes with exact coefficients.
/// Zero coefficients are never stored; keys are canonical forms.
template <typename Graph>
class GraphSum {
 public:
  struct Term {
    Graph graph;
    Rational coefficient;
  };

  void add(const Graph& g, const Rational& c) { add(canonical_form(g), g, c); }

  void add(const CanonicalForm& key, const Graph& g, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(key.key);
    if (it == terms_.end()) {
      terms_.emplace(key.key, Term{g, c});
      return;
    }
    it->second.coefficient += c;
    if (it->second.coefficient == 0) terms_.erase(it);
  }

  Rational coefficient(const Graph& g) const {
    auto it = terms_.find(canonical_form(g).key);
    return it == terms_.end() ? Rational(0) : it->second.coefficient;
  }

  GraphSum& operator+=(const GraphSum& other) {
    for (const auto& [key, term] : other.terms_) add(CanonicalForm{key}, term.graph, term.coefficient);
    return *this;
  }

  const std::map<std::string, Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  friend bool operator==(const GraphSum& a, const GraphSum& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (const auto& [key, term] : a.terms_) {
      auto it = b.terms_.find(key);
      if (it == b.terms_.end() || it->second.coefficient != term.coefficient) return false;
    }
    return true;
  }

 private:
  std::map<std::string, Term> terms_;
};

/// One representative per isomorphism class of stable graphs of weight n,
/// sorted by canonical key. Throws std::out_of_range unless 1 <= n <= bound.
std::vector<MultiDigraph> enumerate_stable(int n, int bound = kDefaultStableWeightBound);

/// Strongly connected pointed graphs of weight k whose ordinary vertices are
/// all stable, one per pointed isomorphism class, sorted by canonical key.
std::vector<PointedGraph> enumerate_pointed_stable_strong(int k, int bound = kDefaultPointedWeightBound);

/// Strongly connected pointed graphs of weight w whose ordinary vertices are
/// semistable (equivalently: no smoothable vertex). Used by the exhaustive
/// property suites; w <= 4.
std::vector<PointedGraph> enumerate_pointed_semistable_strong(int w);

/// Box^k = sum over enumerate_pointed_stable_strong(k) of
/// (-1)^(|V|-1) phi / |Aut| with |V| counting the distinguished vertex.
GraphSum<PointedGraph> laplacian_power(int k, PhiCache& cache, int bound = kDefaultPointedWeightBound);

/// Number of labelled matrices inspected by the last enumeration on this
/// thread (diagnostics for the benchmark).
long long last_enumeration_candidates();

namespace serial {
std::vector<MultiDigraph> enumerate_stable(int n, int bound = kDefaultStableWeightBound);
std::vector<PointedGraph> enumerate_pointed_stable_strong(int k, int bound = kDefaultPointedWeightBound);
std::vector<PointedGraph> enumerate_pointed_semistable_strong(int w);
}  // namespace serial

}  // namespace kheat
