#include "kheat/kahler.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>

namespace kheat {

namespace {

// Runs body(i) for i in [0, count), in parallel unless exec is Serial.
void for_each_index(Execution exec, std::size_t count, const std::function<void(std::size_t)>& body) {
  const long long n = static_cast<long long>(count);
  if (exec == Execution::Serial) {
    for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

void check_dims(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDimension)
    throw std::invalid_argument("potential dimension must be in 1.." + std::to_string(kMaxJetDimension));
  if (order < 4 || order > kMaxJetOrder)
    throw std::invalid_argument("potential order must be in 4.." + std::to_string(kMaxJetOrder));
}

// All multi-indices over dim variables with total in [lo, hi], by total then
// lexicographically.
std::vector<std::vector<int>> multi_indices(int dim, int lo, int hi) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  for (int total = lo; total <= hi; ++total) {
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == dim - 1) {
        cur[static_cast<std::size_t>(pos)] = left;
        out.push_back(cur);
        return;
      }
      for (int a = left; a >= 0; --a) {
        cur[static_cast<std::size_t>(pos)] = a;
        rec(pos + 1, left - a);
      }
    };
    rec(0, total);
  }
  return out;
}

int total(const std::vector<int>& v) {
  int s = 0;
  for (int x : v) s += x;
  return s;
}

using Matrix = std::vector<Jet>;  // n x n, row-major

Matrix matmul(const Matrix& a, const Matrix& b, int n, Execution exec) {
  Matrix c(a.size());
  for_each_index(exec, a.size(), [&](std::size_t f) {
    const std::size_t i = f / static_cast<std::size_t>(n), j = f % static_cast<std::size_t>(n);
    Jet acc = Jet::multiply(a[i * static_cast<std::size_t>(n)], b[j]);
    for (int k = 1; k < n; ++k)
      acc += Jet::multiply(a[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)],
                           b[static_cast<std::size_t>(k) * static_cast<std::size_t>(n) + j]);
    c[f] = std::move(acc);
  });
  return c;
}

// (scale * (I + E))^{-1} = scale^{-1} sum_k (-E)^k for E vanishing at the
// origin; stops once the powers are zero to the jet order.
Matrix neumann_inverse(const Matrix& m, int n, const GaussianRational& scale, Execution exec) {
  const GaussianRational inv_scale = GaussianRational(1) / scale;
  Matrix e(m.size());
  const int dim = m.front().dim();
  int order = m.front().order();
  for (std::size_t f = 0; f < m.size(); ++f) {
    order = std::min(order, m[f].order());
    e[f] = m[f] * inv_scale;
    if (f % static_cast<std::size_t>(n + 1) == 0) e[f] -= Jet::constant(dim, m[f].order(), GaussianRational(1));
    if (!e[f].value().is_zero()) throw std::invalid_argument("Neumann inverse needs the identity at the origin");
  }
  Matrix neg_e(e.size());
  for (std::size_t f = 0; f < e.size(); ++f) neg_e[f] = -e[f];
  Matrix power(m.size(), Jet(dim, order));
  for (int i = 0; i < n; ++i)
    power[static_cast<std::size_t>(i * (n + 1))] = Jet::constant(dim, order, GaussianRational(1));
  Matrix sum = power;
  for (int k = 1; k <= order; ++k) {
    power = matmul(power, neg_e, n, exec);
    bool zero = true;
    for (std::size_t f = 0; f < sum.size(); ++f) {
      sum[f] += power[f];
      zero = zero && power[f].is_zero();
    }
    if (zero) break;
  }
  for (auto& j : sum) j *= inv_scale;
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------

KahlerPotential KahlerPotential::flat(int dim, int order) { return from_monomials(dim, order, {}); }

KahlerPotential KahlerPotential::random(int dim, int order, std::uint64_t seed) {
  check_dims(dim, order);
  // Raw engine output keeps the stream identical across standard libraries.
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    const long num = static_cast<long>(rng() % 7) - 3;
    const long den = 1 + static_cast<long>(rng() % 2);
    Rational q(num, den);
    q.canonicalize();
    return q;
  };
  const auto indices = multi_indices(dim, 2, order - 2);
  std::vector<PotentialMonomial> monomials;
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = a; b < indices.size(); ++b) {
      const auto& alpha = indices[a];
      const auto& beta = indices[b];
      if (total(alpha) + total(beta) > order) continue;
      GaussianRational c;
      c.re = draw();
      if (a != b) c.im = draw();
      if (!c.is_zero()) monomials.push_back({Exponent{alpha, beta}, c});
    }
  return from_monomials(dim, order, monomials);
}

KahlerPotential KahlerPotential::from_monomials(int dim, int order, const std::vector<PotentialMonomial>& monomials) {
  check_dims(dim, order);
  Jet jet(dim, order);
  std::map<Jet::Key, GaussianRational> coeffs;
  auto put = [&](Jet::Key k, const GaussianRational& c) {
    auto [it, fresh] = coeffs.emplace(k, c);
    if (!fresh && !(it->second == c))
      throw std::invalid_argument("potential monomials are not conjugate-symmetric");
  };
  for (const auto& m : monomials) {
    const int p = total(m.exponent.alpha), q = total(m.exponent.beta);
    if (static_cast<int>(m.exponent.alpha.size()) != dim || static_cast<int>(m.exponent.beta.size()) != dim)
      throw std::invalid_argument("potential monomial has the wrong number of variables");
    if (p < 2 || q < 2) throw std::invalid_argument("potential monomials need bidegree (p, q) with p, q >= 2");
    if (p + q > order) throw std::invalid_argument("potential monomial above the truncation order");
    if (m.coefficient.is_zero()) continue;
    put(jet.key(m.exponent), m.coefficient);
    put(jet.key(Exponent{m.exponent.beta, m.exponent.alpha}), m.coefficient.conj());
  }
  for (int i = 0; i < dim; ++i) {
    Exponent e{std::vector<int>(static_cast<std::size_t>(dim), 0), std::vector<int>(static_cast<std::size_t>(dim), 0)};
    e.alpha[static_cast<std::size_t>(i)] = 1;
    e.beta[static_cast<std::size_t>(i)] = 1;
    jet.add_term(e, GaussianRational(1));
  }
  for (const auto& [k, c] : coeffs) jet.add_term(jet.exponent(k), c);
  return KahlerPotential(std::move(jet));
}

KahlerPotential KahlerPotential::from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("d").get<int>();
    const int order = j.at("N").get<int>();
    std::vector<PotentialMonomial> monomials;
    if (j.contains("monomials")) {
      for (const auto& m : j.at("monomials")) {
        PotentialMonomial pm;
        pm.exponent.alpha = m.at("alpha").get<std::vector<int>>();
        pm.exponent.beta = m.at("beta").get<std::vector<int>>();
        pm.coefficient.re = parse_rational(m.value("re", std::string("0")));
        pm.coefficient.im = parse_rational(m.value("im", std::string("0")));
        monomials.push_back(std::move(pm));
      }
    }
    return from_monomials(dim, order, monomials);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed potential: ") + e.what());
  }
}

KahlerPotential KahlerPotential::from_json_text(const std::string& text) {
  try {
    return from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed potential JSON: ") + e.what());
  }
}

nlohmann::json KahlerPotential::to_json() const {
  nlohmann::json monomials = nlohmann::json::array();
  for (const auto& [k, c] : jet_.terms()) {
    const auto e = jet_.exponent(k);
    if (total(e.alpha) < 2) continue;  // the flat part is implied
    monomials.push_back({{"alpha", e.alpha}, {"beta", e.beta}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
  }
  return {{"d", dim()}, {"N", order()}, {"monomials", monomials}};
}

// ---------------------------------------------------------------------------

KahlerGeometry::KahlerGeometry(const KahlerPotential& phi, Execution exec) : dim_(phi.dim()), exec_(exec) {
  const int d = dim_;
  const auto n = static_cast<std::size_t>(d);
  const Jet& p = phi.jet();

  metric_ = TensorJet(d, {Slot::Unbarred, Slot::Barred}, p.order() - 2);
  for_each_index(exec, n * n, [&](std::size_t f) { metric_[f] = p.d(static_cast<int>(f / n)).dbar(static_cast<int>(f % n)); });

  Matrix g(n * n);
  for (std::size_t f = 0; f < n * n; ++f) g[f] = metric_[f];
  const Matrix h = neumann_inverse(g, d, GaussianRational(1), exec);
  inverse_ = TensorJet(d, {Slot::Unbarred, Slot::Barred}, p.order() - 2);
  for (std::size_t f = 0; f < n * n; ++f) inverse_[f] = h[f];

  // dg[k][i][p] = d_k g_{i pbar}, dbg[l][m][j] = dbar_l g_{m jbar}.
  std::vector<Jet> dg(n * n * n), dbg(n * n * n);
  for_each_index(exec, n * n * n, [&](std::size_t f) {
    const int k = static_cast<int>(f / (n * n));
    const std::size_t rest = f % (n * n);
    dg[f] = metric_[rest].d(k);
    dbg[f] = metric_[rest].dbar(k);
  });

  // A[l][j][p] = sum_m h[p][m] dbar_l g_{m jbar}
  std::vector<Jet> a(n * n * n);
  for_each_index(exec, n * n * n, [&](std::size_t f) {
    const std::size_t l = f / (n * n), j = (f / n) % n, pp = f % n;
    Jet acc(d, p.order());
    for (std::size_t m = 0; m < n; ++m) acc += Jet::multiply(h[pp * n + m], dbg[l * n * n + m * n + j]);
    a[f] = std::move(acc);
  });

  curvature_ = TensorJet(d, {Slot::Unbarred, Slot::Barred, Slot::Unbarred, Slot::Barred}, p.order() - 4);
  for_each_index(exec, curvature_.size(), [&](std::size_t f) {
    const auto idx = curvature_.unflatten(f);
    const auto i = static_cast<std::size_t>(idx[0]), j = static_cast<std::size_t>(idx[1]);
    const int k = idx[2], l = idx[3];
    Jet r = -metric_[i * n + j].d(k).dbar(l);
    for (std::size_t pp = 0; pp < n; ++pp)
      r += Jet::multiply(a[static_cast<std::size_t>(l) * n * n + j * n + pp], dg[static_cast<std::size_t>(k) * n * n + i * n + pp]);
    curvature_[f] = std::move(r);
  });

  ricci_ = TensorJet(d, {Slot::Unbarred, Slot::Barred}, p.order() - 4);
  for_each_index(exec, n * n, [&](std::size_t f) {
    Jet acc(d, p.order());
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) acc += Jet::multiply(h[l * n + k], curvature_[f * n * n + k * n + l]);
    ricci_[f] = std::move(acc);
  });

  scalar_ = Jet(d, p.order());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scalar_ += Jet::multiply(h[j * n + i], ricci_[i * n + j]);

  christoffel_ = TensorJet(d, {Slot::Unbarred, Slot::Unbarred, Slot::Unbarred}, p.order() - 3);
  for_each_index(exec, christoffel_.size(), [&](std::size_t f) {
    const std::size_t k = f / (n * n), aa = (f / n) % n, m = f % n;
    Jet acc(d, p.order());
    for (std::size_t l = 0; l < n; ++l) acc += Jet::multiply(h[l * n + m], dg[k * n * n + aa * n + l]);
    christoffel_[f] = std::move(acc);
  });
}

TensorJet KahlerGeometry::covariant_derivative(const TensorJet& t, Slot direction) const {
  if (t.dim() != dim_) throw std::invalid_argument("tensor dimension does not match the geometry");
  auto slots = t.slots();
  slots.push_back(direction);
  const int order = t.size() ? t[0].order() - 1 : -1;
  TensorJet out(dim_, slots, order);
  const auto n = static_cast<std::size_t>(dim_);
  const bool unbarred = direction == Slot::Unbarred;
  for_each_index(exec_, out.size(), [&](std::size_t f) {
    const std::size_t base = f / n;
    const int gamma = static_cast<int>(f % n);
    Jet acc = unbarred ? t[base].d(gamma) : t[base].dbar(gamma);
    auto idx = t.unflatten(base);
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (t.slots()[s] != direction) continue;  // mixed symbols vanish
      const int beta = idx[s];
      for (int m = 0; m < dim_; ++m) {
        auto moved = idx;
        moved[s] = m;
        Jet symbol = christoffel_.at({gamma, beta, m});
        if (!unbarred) symbol = symbol.conj();
        acc -= Jet::multiply(symbol, t.at(moved));
      }
    }
    out[f] = std::move(acc);
  });
  return out;
}

Jet KahlerGeometry::box(const Jet& f) const {
  const auto n = static_cast<std::size_t>(dim_);
  Jet acc(dim_, f.order());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      acc += Jet::multiply(inverse_[b * n + a], f.d(static_cast<int>(a)).dbar(static_cast<int>(b)));
  return acc;
}

int sigma_required_order(int k) {
  static constexpr std::array<int, 15> orders{4, 4, 4, 4, 4, 4, 4, 6, 6, 6, 5, 5, 5, 8, 4};
  if (k < 1 || k > static_cast<int>(orders.size())) throw std::out_of_range("sigma index must be in 1..15");
  return orders[static_cast<std::size_t>(k - 1)];
}

GaussianRational KahlerGeometry::sigma(int k) const {
  const int need = sigma_required_order(k);
  const int have = metric_[0].order() + 2;
  if (have < need)
    throw TruncationError("sigma_" + std::to_string(k) + " needs a potential of order " + std::to_string(need), need);
  const int d = dim_;
  auto R = [&](int i, int j, int kk, int l) { return curvature_.at({i, j, kk, l}).value(); };
  auto Ric = [&](int i, int j) { return ricci_.at({i, j}).value(); };
  const GaussianRational rho = scalar_.value();
  GaussianRational s;
  switch (k) {
    case 1: return rho * rho * rho;
    case 2:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += Ric(i, j) * Ric(j, i);
      return rho * s;
    case 3:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk)
            for (int l = 0; l < d; ++l) s += R(i, j, kk, l) * R(j, i, l, kk);
      return rho * s;
    case 4:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk)
            for (int l = 0; l < d; ++l) s += Ric(i, j) * Ric(kk, l) * R(j, i, l, kk);
      return s;
    case 5:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk)
            for (int l = 0; l < d; ++l)
              for (int m = 0; m < d; ++m) s += Ric(i, j) * R(kk, i, l, m) * R(j, kk, m, l);
      return s;
    case 6:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk) s += Ric(i, j) * Ric(j, kk) * Ric(kk, i);
      return s;
    case 7:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk)
            for (int l = 0; l < d; ++l)
              for (int m = 0; m < d; ++m)
                for (int nn = 0; nn < d; ++nn) s += R(i, j, kk, l) * R(j, i, m, nn) * R(l, kk, nn, m);
      return s;
    case 8: return rho * box(scalar_).value();
    case 9: {
      const auto second = covariant_derivative(covariant_derivative(ricci_, Slot::Unbarred), Slot::Barred);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk) s += Ric(i, j) * second.at({j, i, kk, kk}).value();
      return s;
    }
    case 10: {
      const auto second = covariant_derivative(covariant_derivative(curvature_, Slot::Unbarred), Slot::Barred);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk)
            for (int l = 0; l < d; ++l)
              for (int m = 0; m < d; ++m) s += R(i, j, kk, l) * second.at({j, i, l, kk, m, m}).value();
      return s;
    }
    case 11:
      for (int i = 0; i < d; ++i) s += scalar_.d(i).value() * scalar_.dbar(i).value();
      return s;
    case 12: {
      const auto up = covariant_derivative(ricci_, Slot::Unbarred);
      const auto down = covariant_derivative(ricci_, Slot::Barred);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk) s += up.at({i, j, kk}).value() * down.at({j, i, kk}).value();
      return s;
    }
    case 13: {
      const auto up = covariant_derivative(curvature_, Slot::Unbarred);
      const auto down = covariant_derivative(curvature_, Slot::Barred);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk)
            for (int l = 0; l < d; ++l)
              for (int m = 0; m < d; ++m)
                s += up.at({i, j, kk, l, m}).value() * down.at({j, i, l, kk, m}).value();
      return s;
    }
    case 14: return box(box(scalar_)).value();
    case 15:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int kk = 0; kk < d; ++kk)
            for (int l = 0; l < d; ++l)
              for (int m = 0; m < d; ++m)
                for (int nn = 0; nn < d; ++nn) s += R(i, j, kk, l) * R(j, m, l, nn) * R(m, i, nn, kk);
      return s;
    default: throw std::out_of_range("sigma index must be in 1..15");
  }
}

ComplexInvariants complex_invariants(const KahlerGeometry& geo) {
  const int d = geo.dim();
  ComplexInvariants out;
  out.scalar = geo.scalar().value();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out.ricci_norm += geo.ricci().at({i, j}).value() * geo.ricci().at({j, i}).value();
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out.riemann_norm += geo.curvature().at({i, j, k, l}).value() * geo.curvature().at({j, i, l, k}).value();
    }
  out.box_scalar = geo.box(geo.scalar()).value();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct VertexEnds {
  std::vector<int> out_edges;  // positions in the unit-edge list
  std::vector<int> in_edges;
};

GaussianRational evaluate_impl(const MultiDigraph& g, int point, const KahlerPotential& phi, const Jet* f,
                               Execution exec) {
  const int n = g.vertex_count();
  const int d = phi.dim();
  std::vector<VertexEnds> ends(static_cast<std::size_t>(n));
  int edge_count = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < g(u, v); ++k) {
        ends[static_cast<std::size_t>(u)].out_edges.push_back(edge_count);
        ends[static_cast<std::size_t>(v)].in_edges.push_back(edge_count);
        ++edge_count;
      }
  for (int v = 0; v < n; ++v) {
    const auto& e = ends[static_cast<std::size_t>(v)];
    const int deg = static_cast<int>(e.out_edges.size() + e.in_edges.size());
    const int have = v == point ? f->order() : phi.order();
    if (deg > have)
      throw TruncationError("vertex with " + std::to_string(deg) + " derivatives exceeds jet order " +
                                std::to_string(have),
                            deg);
  }

  // Derivative values d^alpha dbar^beta = alpha! beta! coeff, looked up by key.
  auto derivative_table = [](const Jet& jet) {
    std::unordered_map<Jet::Key, GaussianRational> table;
    for (const auto& [k, c] : jet.terms()) {
      const auto e = jet.exponent(k);
      Integer w = 1;
      for (int a : e.alpha) w *= factorial(a);
      for (int b : e.beta) w *= factorial(b);
      table.emplace(k, c * GaussianRational(Rational(w)));
    }
    return table;
  };
  const auto phi_table = derivative_table(phi.jet());
  std::unordered_map<Jet::Key, GaussianRational> f_table;
  if (f) f_table = derivative_table(*f);

  long long assignments = 1;
  for (int e = 0; e < edge_count; ++e) assignments *= d;

  const int threads = exec == Execution::Serial ? 1 : omp_get_max_threads();
  std::vector<GaussianRational> partial(static_cast<std::size_t>(threads));
  auto body = [&](long long t, GaussianRational& acc, std::vector<int>& index, Exponent& ex) {
    long long rest = t;
    for (int e = 0; e < edge_count; ++e) {
      index[static_cast<std::size_t>(e)] = static_cast<int>(rest % d);
      rest /= d;
    }
    GaussianRational prod(1);
    for (int v = 0; v < n && !prod.is_zero(); ++v) {
      std::fill(ex.alpha.begin(), ex.alpha.end(), 0);
      std::fill(ex.beta.begin(), ex.beta.end(), 0);
      const auto& e = ends[static_cast<std::size_t>(v)];
      for (int pos : e.out_edges) ++ex.alpha[static_cast<std::size_t>(index[static_cast<std::size_t>(pos)])];
      for (int pos : e.in_edges) ++ex.beta[static_cast<std::size_t>(index[static_cast<std::size_t>(pos)])];
      const auto& table = v == point ? f_table : phi_table;
      const auto it = table.find(phi.jet().key(ex));
      if (it == table.end()) {
        prod = GaussianRational();
      } else {
        prod *= it->second;
      }
    }
    acc += prod;
  };
  auto fresh_exponent = [&] {
    return Exponent{std::vector<int>(static_cast<std::size_t>(d)), std::vector<int>(static_cast<std::size_t>(d))};
  };
  if (exec == Execution::Serial) {
    std::vector<int> index(static_cast<std::size_t>(edge_count));
    Exponent ex = fresh_exponent();
    for (long long t = 0; t < assignments; ++t) body(t, partial[0], index, ex);
  } else {
#pragma omp parallel
    {
      std::vector<int> index(static_cast<std::size_t>(edge_count));
      Exponent ex = fresh_exponent();
      auto& acc = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
      for (long long t = 0; t < assignments; ++t) body(t, acc, index, ex);
    }
  }
  GaussianRational total;
  for (const auto& p : partial) total += p;
  return total;
}

}  // namespace

GaussianRational evaluate_graph(const MultiDigraph& g, const KahlerPotential& phi, Execution exec) {
  return evaluate_impl(g, -1, phi, nullptr, exec);
}

GaussianRational evaluate_pointed_graph(const PointedGraph& g, const KahlerPotential& phi, const Jet& f,
                                        Execution exec) {
  if (f.dim() != phi.dim()) throw std::invalid_argument("test function dimension does not match the potential");
  return evaluate_impl(g.graph(), PointedGraph::kPoint, phi, &f, exec);
}

GaussianRational evaluate_sum(const GraphSum<MultiDigraph>& sum, const KahlerPotential& phi, Execution exec) {
  GaussianRational total;
  for (const auto& [key, term] : sum.terms())
    total += GaussianRational(term.coefficient) * evaluate_graph(term.graph, phi, exec);
  return total;
}

GaussianRational evaluate_pointed_sum(const GraphSum<PointedGraph>& sum, const KahlerPotential& phi, const Jet& f,
                                      Execution exec) {
  GaussianRational total;
  for (const auto& [key, term] : sum.terms())
    total += GaussianRational(term.coefficient) * evaluate_pointed_graph(term.graph, phi, f, exec);
  return total;
}

// ---------------------------------------------------------------------------

RealInvariants real_invariants(const KahlerPotential& phi, Execution exec) {
  constexpr int kNeeded = 6;
  if (phi.order() < kNeeded) throw TruncationError("real invariants need a potential of order 6", kNeeded);
  const int d = phi.dim();
  const std::size_t n = static_cast<std::size_t>(2 * d);
  const Jet p = phi.jet().truncated(kNeeded);
  const GaussianRational I = GaussianRational::i();

  // Coordinate c < d is x_c, otherwise y_{c-d}.
  auto D = [&](int c, const Jet& f) {
    if (c < d) return f.d(c) + f.dbar(c);
    return I * (f.d(c - d) - f.dbar(c - d));
  };

  std::vector<Jet> gc(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gc[static_cast<std::size_t>(i * d + j)] = p.d(i).dbar(j);
  auto G = [&](int i, int j) -> const Jet& { return gc[static_cast<std::size_t>(i * d + j)]; };

  Matrix g(n * n);
  for (int a = 0; a < 2 * d; ++a)
    for (int b = 0; b < 2 * d; ++b) {
      const int i = a % d, j = b % d;
      const bool ax = a < d, bx = b < d;
      Jet v;
      if (ax == bx) {
        v = G(i, j) + G(j, i);
      } else if (ax) {
        v = I * (G(j, i) - G(i, j));
      } else {
        v = I * (G(i, j) - G(j, i));
      }
      g[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = std::move(v);
    }
  const Matrix inv = neumann_inverse(g, 2 * d, GaussianRational(2), exec);
  auto at = [&](const std::vector<Jet>& t, std::initializer_list<std::size_t> idx) -> const Jet& {
    std::size_t f = 0;
    for (auto x : idx) f = f * n + x;
    return t[f];
  };

  std::vector<Jet> dg(n * n * n);  // dg[e][x][y] = D_e g_{xy}
  for_each_index(exec, dg.size(), [&](std::size_t f) {
    dg[f] = D(static_cast<int>(f / (n * n)), g[f % (n * n)]);
  });

  // gamma[a][b][c] = Gamma^a_{bc}
  std::vector<Jet> gamma(n * n * n);
  const GaussianRational half = GaussianRational(Rational(1, 2));
  for_each_index(exec, gamma.size(), [&](std::size_t f) {
    const std::size_t a = f / (n * n), b = (f / n) % n, c = f % n;
    Jet acc(d, p.order());
    for (std::size_t e = 0; e < n; ++e) {
      Jet bracket = at(dg, {b, e, c}) + at(dg, {c, e, b}) - at(dg, {e, b, c});
      acc += Jet::multiply(inv[a * n + e], bracket);
    }
    gamma[f] = acc * half;
  });

  // riem[a][b][c][e] = R^a_{bce}
  std::vector<Jet> riem(n * n * n * n);
  for_each_index(exec, riem.size(), [&](std::size_t f) {
    const std::size_t a = f / (n * n * n), b = (f / (n * n)) % n, c = (f / n) % n, e = f % n;
    Jet r = D(static_cast<int>(c), at(gamma, {a, e, b})) - D(static_cast<int>(e), at(gamma, {a, c, b}));
    for (std::size_t x = 0; x < n; ++x) {
      r += Jet::multiply(at(gamma, {a, c, x}), at(gamma, {x, e, b}));
      r -= Jet::multiply(at(gamma, {a, e, x}), at(gamma, {x, c, b}));
    }
    riem[f] = std::move(r);
  });

  std::vector<Jet> ric(n * n);  // Ric_{be} = R^a_{bae}
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t e = 0; e < n; ++e) {
      Jet acc(d, p.order());
      for (std::size_t a = 0; a < n; ++a) acc += riem[((a * n + b) * n + a) * n + e];
      ric[b * n + e] = std::move(acc);
    }
  Jet scalar(d, p.order());
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t e = 0; e < n; ++e) scalar += Jet::multiply(inv[b * n + e], ric[b * n + e]);

  RealInvariants out;
  out.scalar = scalar.value();

  // Values at the origin and full contractions.
  std::vector<GaussianRational> g0(n * n), inv0(n * n), ric0(n * n);
  for (std::size_t f = 0; f < n * n; ++f) {
    g0[f] = g[f].value();
    inv0[f] = inv[f].value();
    ric0[f] = ric[f].value();
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t e = 0; e < n; ++e)
          if (!inv0[a * n + c].is_zero() && !inv0[b * n + e].is_zero())
            out.ricci_norm += inv0[a * n + c] * inv0[b * n + e] * ric0[a * n + b] * ric0[c * n + e];

  // Fully covariant R_{abce} at 0, then contract with inverse metrics slot by slot.
  std::vector<GaussianRational> low(n * n * n * n);
  for (std::size_t f = 0; f < low.size(); ++f) {
    const std::size_t a = f / (n * n * n), rest = f % (n * n * n);
    for (std::size_t x = 0; x < n; ++x)
      if (!g0[a * n + x].is_zero()) low[f] += g0[a * n + x] * riem[x * n * n * n + rest].value();
  }
  std::vector<GaussianRational> up = low;
  for (int slot = 0; slot < 4; ++slot) {
    std::vector<GaussianRational> next(up.size());
    std::size_t stride = 1;
    for (int s = 3; s > slot; --s) stride *= n;
    for (std::size_t f = 0; f < up.size(); ++f) {
      const std::size_t idx = (f / stride) % n;
      const std::size_t base = f - idx * stride;
      for (std::size_t x = 0; x < n; ++x)
        if (!inv0[idx * n + x].is_zero()) next[f] += inv0[idx * n + x] * up[base + x * stride];
    }
    up = std::move(next);
  }
  for (std::size_t f = 0; f < low.size(); ++f) out.riemann_norm += low[f] * up[f];

  // Delta P = -g^{ab} (D_a D_b P - Gamma^c_{ab} D_c P)
  Jet lap(d, p.order());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      Jet hess = D(static_cast<int>(a), D(static_cast<int>(b), scalar));
      for (std::size_t c = 0; c < n; ++c) hess -= Jet::multiply(at(gamma, {c, a, b}), D(static_cast<int>(c), scalar));
      lap -= Jet::multiply(inv[a * n + b], hess);
    }
  out.scalar_laplacian = lap.value();
  return out;
}

}  // namespace kheat
