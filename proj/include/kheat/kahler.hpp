#pragma once

// Local Kahler geometry from a polynomial potential in normal coordinates:
// metric, curvature, covariant derivatives, the sigma invariants, graph
// evaluation, and an independent computation on the underlying real metric.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kheat/digraph.hpp"
#include "kheat/enumerate.hpp"
#include "kheat/jet.hpp"

namespace kheat {

inline constexpr int kDefaultPotentialOrder = 8;

struct PotentialMonomial {
  Exponent exponent;
  GaussianRational coefficient;
};

/// phi = sum_i z_i zbar_i + higher terms, every higher monomial of bidegree
/// (p, q) with p, q >= 2 and real as a function.
class KahlerPotential {
 public:
  static KahlerPotential flat(int dim, int order);
  /// Deterministic in (dim, order, seed). Every admissible monomial gets a
  /// coefficient with parts p/q, p in [-3, 3], q in {1, 2}.
  static KahlerPotential random(int dim, int order, std::uint64_t seed);
  /// Higher-order monomials; the conjugate partner of each is filled in.
  /// Throws std::invalid_argument on a bad bidegree or inconsistent partners.
  static KahlerPotential from_monomials(int dim, int order, const std::vector<PotentialMonomial>& monomials);

  static KahlerPotential from_json(const nlohmann::json& j);
  static KahlerPotential from_json_text(const std::string& text);
  nlohmann::json to_json() const;

  int dim() const { return jet_.dim(); }
  int order() const { return jet_.order(); }
  const Jet& jet() const { return jet_; }

 private:
  explicit KahlerPotential(Jet jet) : jet_(std::move(jet)) {}
  Jet jet_;
};

enum class Execution { Parallel, Serial };

class KahlerGeometry {
 public:
  explicit KahlerGeometry(const KahlerPotential& phi, Execution exec = Execution::Parallel);

  int dim() const { return dim_; }
  Execution execution() const { return exec_; }

  /// g_{i jbar}, slots (Unbarred, Barred).
  const TensorJet& metric() const { return metric_; }
  /// Matrix inverse of g as stored: sum_j g[i][j] inverse[j][k] = delta_ik.
  /// The contravariant metric is g^{i jbar} = inverse[j][i].
  const TensorJet& inverse_metric() const { return inverse_; }
  /// R_{i jbar k lbar}.
  const TensorJet& curvature() const { return curvature_; }
  /// Ric_{i jbar} = g^{k lbar} R_{i jbar k lbar}.
  const TensorJet& ricci() const { return ricci_; }
  /// rho = g^{i jbar} Ric_{i jbar}.
  const Jet& scalar() const { return scalar_; }

  /// Gamma^m_{k a} stored at (k, a, m); the barred symbols are conjugates and
  /// the mixed ones vanish.
  const TensorJet& christoffel() const { return christoffel_; }
  /// Appends one slot of the given kind: T_{... / gamma}.
  TensorJet covariant_derivative(const TensorJet& t, Slot direction) const;
  /// Box f = g^{i jbar} f_{/i jbar} on functions.
  Jet box(const Jet& f) const;

  /// sigma_k at the origin, k in 1..15.
  GaussianRational sigma(int k) const;

 private:
  int dim_;
  Execution exec_;
  TensorJet metric_, inverse_, curvature_, ricci_, christoffel_;
  Jet scalar_;
};

/// Truncation order of phi needed to evaluate sigma_k.
int sigma_required_order(int k);

/// Sum over edge index assignments of the product over vertices of
/// d^{out} dbar^{in} phi at the origin (out-edges carry z indices, in-edges
/// zbar). Throws TruncationError if a vertex needs more derivatives than the
/// potential keeps.
GaussianRational evaluate_graph(const MultiDigraph& g, const KahlerPotential& phi,
                                Execution exec = Execution::Parallel);
/// Same, with the distinguished vertex reading derivatives of f.
GaussianRational evaluate_pointed_graph(const PointedGraph& g, const KahlerPotential& phi, const Jet& f,
                                        Execution exec = Execution::Parallel);
GaussianRational evaluate_sum(const GraphSum<MultiDigraph>& sum, const KahlerPotential& phi,
                              Execution exec = Execution::Parallel);
GaussianRational evaluate_pointed_sum(const GraphSum<PointedGraph>& sum, const KahlerPotential& phi, const Jet& f,
                                      Execution exec = Execution::Parallel);

/// Riemannian invariants at the origin of the real metric on R^{2d}
/// underlying 2 sum g_{i jbar} dz_i dzbar_j (symmetrised), computed without
/// the complex curvature.
struct RealInvariants {
  GaussianRational scalar;          // P
  GaussianRational ricci_norm;      // |Ric|^2
  GaussianRational riemann_norm;    // |R|^2
  GaussianRational scalar_laplacian;  // Delta P, with Delta = -div grad
};

/// Needs order >= 6.
RealInvariants real_invariants(const KahlerPotential& phi, Execution exec = Execution::Parallel);

/// Complex-side contractions at the origin used alongside the sigma basis.
struct ComplexInvariants {
  GaussianRational scalar;       // rho
  GaussianRational ricci_norm;   // Ric_{i jbar} Ric_{j ibar}
  GaussianRational riemann_norm;  // R_{i jbar k lbar} R_{j ibar l kbar}
  GaussianRational box_scalar;   // Box rho
};

ComplexInvariants complex_invariants(const KahlerGeometry& geo);

}  // namespace kheat
