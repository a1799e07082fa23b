#pragma once

// Heat kernel coefficients as sums over stable graphs:
//
//   a_n = sum_{G stable, w(G) = n} z(G) G,
//   z(G) = (-1)^|V| 2^w / |Aut G| * sum_C (-1)^m(C) phi(Gamma_C) / (m(C) + w)!
//
// where C runs over edge cuttings of G and Gamma_C reroutes every cut edge
// through a new distinguished vertex.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kheat/arith.hpp"
#include "kheat/digraph.hpp"
#include "kheat/enumerate.hpp"
#include "kheat/phi.hpp"

namespace kheat {

/// Cut counts per edge class: for each ordered pair (u, v) with m = A[u][v]
/// >= 1, between 0 and m parallel copies are cut.
struct Cutting {
  struct Entry {
    int from = 0;
    int to = 0;
    int multiplicity = 0;
    int cut = 0;
  };
  std::vector<Entry> entries;

  int cut_count() const;
  /// Number of explicit edge subsets this count vector stands for.
  Integer multiplicity() const;
};

/// Every cut-count vector of g once. Sum of multiplicities is 2^|E|.
std::vector<Cutting> cuttings(const MultiDigraph& g);

/// Original vertex i becomes vertex i + 1; the new vertex 0 is the point.
PointedGraph gamma_of_cutting(const MultiDigraph& g, const Cutting& c);

Rational z_coefficient(const MultiDigraph& g, PhiCache& cache);
Rational z_coefficient(const MultiDigraph& g);

/// z of a disjoint union from its components; must agree with z_coefficient.
Rational z_from_components(const MultiDigraph& g, PhiCache& cache);

GraphSum<MultiDigraph> heat_coefficient(int n, PhiCache& cache, int bound = kDefaultStableWeightBound);

namespace serial {
Rational z_coefficient(const MultiDigraph& g, PhiCache& cache);
GraphSum<MultiDigraph> heat_coefficient(int n, PhiCache& cache, int bound = kDefaultStableWeightBound);
}  // namespace serial

/// A complete pairing of the loose ends left by deleting the point: the i-th
/// outgoing end (an edge u -> point) is joined to the target[i]-th incoming
/// end (an edge point -> v).
struct Pairing {
  std::vector<int> target;
};

struct PairingResult {
  Pairing pairing;
  MultiDigraph graph;  // ordinary vertex i of the pointed graph becomes i - 1
};

/// All m! pairings. Requires no loops at the point and equal in/out degree.
std::vector<PairingResult> pairings(const PointedGraph& g);

struct DualityCheck {
  Rational pairing_side;  // #{P : G_P ~ G} / |Aut Gamma|
  Rational cutting_side;  // #{C : Gamma_C ~ Gamma} / |Aut G|
  bool holds() const { return pairing_side == cutting_side; }
};

DualityCheck verify_pairing_cutting_duality(const PointedGraph& gamma, const MultiDigraph& g);

// ---------------------------------------------------------------------------
// Weight-three invariant basis.

inline constexpr int kSigmaCount = 15;
using SigmaVector = std::array<Rational, kSigmaCount>;

/// The fifteen stable graphs of weight three, tau_1 .. tau_15 (1-based).
MultiDigraph tau_graph(int index);
/// Row i of the tau -> sigma conversion: tau_i = sum_j row[j] sigma_{j+1}.
std::array<int, kSigmaCount> tau_sigma_row(int index);
/// 1-based tau index of g, if g is one of the fifteen.
std::optional<int> tau_index(const MultiDigraph& g);

/// Throws std::invalid_argument on a graph outside the tau basis.
SigmaVector tau_to_sigma(const GraphSum<MultiDigraph>& a3);

// ---------------------------------------------------------------------------
// Rendering

enum class Format { Text, Json, Latex };
/// Throws std::invalid_argument for unknown names.
Format parse_format(std::string_view name);

/// Index notation for a graph, e.g. "g_{i ibar j jbar}" (text) or
/// "g_{i\bar i j\bar j}" (latex); one factor per vertex.
std::string tensor_notation(const MultiDigraph& g, Format format);

std::string render(const GraphSum<MultiDigraph>& sum, Format format, int weight);
std::string render(const SigmaVector& sigma, Format format);

/// Inverse of render(sum, Format::Json, ...).
GraphSum<MultiDigraph> graph_sum_from_json(const std::string& text);

}  // namespace kheat
