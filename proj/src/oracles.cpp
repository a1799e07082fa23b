#include "kheat/oracles.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "kheat/enumerate.hpp"
#include "kheat/heat.hpp"
#include "kheat/kahler.hpp"
#include "kheat/serialize.hpp"

namespace kheat {

Integer pairing_identity_lhs(const std::vector<int>& m_parts, int l) {
  const int d = static_cast<int>(m_parts.size());
  if (d < 1 || l < 0) throw std::invalid_argument("pairing identity needs d >= 1 and l >= 0");
  Integer total = 0;
  std::function<void(int, int, Integer)> rec = [&](int j, int left, Integer prod) {
    if (j == d - 1) {
      total += prod * binomial(m_parts[static_cast<std::size_t>(j)] + left, m_parts[static_cast<std::size_t>(j)]);
      return;
    }
    for (int a = 0; a <= left; ++a)
      rec(j + 1, left - a,
          prod * binomial(m_parts[static_cast<std::size_t>(j)] + a, m_parts[static_cast<std::size_t>(j)]));
  };
  rec(0, l, Integer(1));
  return total;
}

bool lemma_pairing_identity(const std::vector<int>& m_parts, int l) {
  int m = 0;
  for (int x : m_parts) {
    if (x < 0) throw std::invalid_argument("pairing identity needs non-negative parts");
    m += x;
  }
  const int d = static_cast<int>(m_parts.size());
  return pairing_identity_lhs(m_parts, l) == binomial(l + m + d - 1, m + d - 1);
}

Integer lemma_alternating_sum(int m, int w, int d) {
  if (m < 1 || w < m || d < 0) throw std::invalid_argument("alternating sum needs w >= m >= 1 and d >= 0");
  Integer total = 0;
  for (int j = m; j <= w; ++j) total += sign_power(j) * binomial(w + d, j + d) * binomial(j + d - 1, m + d - 1);
  return total;
}

const std::vector<Table1Entry>& table1() {
  static const std::vector<Table1Entry> entries = {
      {"1; 0>0", 1},
      {"1; 0>0*2", 2},
      {"2; 0>1, 1>0, 1>1", 1},
      {"1; 0>0*3", 6},
      {"2; 0>0, 0>1, 1>0, 1>1", 3},
      {"2; 0>1*2, 1>0*2", 8},
      {"2; 0>1*2, 1>0, 1>1", 4},
      {"2; 0>1, 1>0*2, 1>1", 4},
      {"3; 0>2, 1>0, 1>2, 2>1*2", 4},
      {"3; 0>1, 1>0, 1>2, 2>1, 2>2", 1},
      {"2; 0>1, 1>0, 1>1*2", 2},
      {"3; 0>2, 1>0, 1>1, 2>1, 2>2", 2},
  };
  return entries;
}

void IdentityReport::record(bool ok, const std::string& what) {
  ++checked;
  if (ok) {
    ++matched;
    return;
  }
  if (passed) counterexample = what;
  passed = false;
}

std::string IdentityReport::summary() const {
  return name + ": " + (passed ? "PASS " : "FAIL ") + std::to_string(matched) + "/" + std::to_string(checked);
}

std::string IdentityReport::to_text() const {
  std::ostringstream out;
  out << summary() << "\n";
  if (!parameters.empty()) out << "  parameters: " << parameters << "\n";
  for (const auto& n : notes) out << "  " << n << "\n";
  if (counterexample) out << "  first counterexample: " << *counterexample << "\n";
  return out.str();
}

nlohmann::json IdentityReport::to_json() const {
  nlohmann::json j{{"name", name},     {"parameters", parameters}, {"passed", passed},
                   {"checked", checked}, {"matched", matched},     {"notes", notes}};
  j["counterexample"] = counterexample ? nlohmann::json(*counterexample) : nlohmann::json(nullptr);
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"table1",           "coefficients", "phi-oracle", "duality",
                                                 "multiplicativity", "identities",   "curvature",  "appendix"};
  return names;
}

namespace {

using GR = GaussianRational;

GR q(long p, long d) { return GR(Rational(p, d)); }

IdentityReport make_report(std::string name, std::string parameters) {
  IdentityReport r;
  r.name = std::move(name);
  r.parameters = std::move(parameters);
  return r;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> dims_or(const SuiteOptions& o, std::vector<int> fallback) {
  return o.dims.empty() ? fallback : o.dims;
}

IdentityReport suite_table1(PhiCache& cache) {
  auto r = make_report("table1", "twelve pointed graphs of weight <= 3");
  for (const auto& e : table1()) {
    const PointedGraph g(parse_compact(e.compact));
    const Integer got = phi(g, cache);
    r.record(got == e.phi, e.compact + ": phi " + to_string(got) + ", expected " + to_string(e.phi));
  }
  return r;
}

struct Expected {
  std::string compact;
  Rational z;
};

IdentityReport suite_coefficients(PhiCache& cache) {
  auto r = make_report("coefficients", "z on weights 1..3 and the sigma coefficients");
  const std::vector<std::vector<Expected>> expected = {
      {{"1; 0>0*2", Rational(-1, 3)}},
      {{"1; 0>0*3", Rational(-2, 15)},
       {"2; 0>0*2, 1>1*2", Rational(1, 18)},
       {"2; 0>0, 0>1, 1>0, 1>1", Rational(23, 90)},
       {"2; 0>1*2, 1>0*2", Rational(7, 45)}},
  };
  for (int w = 1; w <= 2; ++w) {
    const auto a = heat_coefficient(w, cache);
    r.record(a.size() == expected[static_cast<std::size_t>(w - 1)].size(),
             "a_" + std::to_string(w) + " has " + std::to_string(a.size()) + " terms");
    for (const auto& e : expected[static_cast<std::size_t>(w - 1)]) {
      const Rational got = a.coefficient(parse_compact(e.compact));
      r.record(got == e.z, e.compact + ": z " + to_string(got) + ", expected " + to_string(e.z));
    }
  }
  const std::array<Rational, kSigmaCount> z3 = {
      Rational(-1, 162),  Rational(-23, 270), Rational(-7, 135), Rational(-17, 135), Rational(-332, 945),
      Rational(-307, 2835), Rational(-74, 405), Rational(2, 45),  Rational(64, 315),  Rational(26, 105),
      Rational(17, 630),  Rational(89, 315),  Rational(1, 10),   Rational(-1, 35),   Rational(-206, 2835)};
  const std::array<Rational, kSigmaCount> c = {
      Rational(1, 162),  Rational(-1, 270), Rational(1, 135), Rational(8, 945),  Rational(-4, 945),
      Rational(-26, 2835), Rational(32, 2835), Rational(2, 45), Rational(1, 315), Rational(2, 105),
      Rational(17, 630), Rational(-1, 315), Rational(1, 70),  Rational(1, 35),   Rational(-2, 567)};
  const auto a3 = heat_coefficient(3, cache);
  r.record(a3.size() == kSigmaCount, "a_3 has " + std::to_string(a3.size()) + " terms");
  for (int i = 1; i <= kSigmaCount; ++i) {
    const Rational got = a3.coefficient(tau_graph(i));
    r.record(got == z3[static_cast<std::size_t>(i - 1)], "z_" + std::to_string(i) + " = " + to_string(got));
  }
  const auto sigma = tau_to_sigma(a3);
  for (int i = 0; i < kSigmaCount; ++i)
    r.record(sigma[static_cast<std::size_t>(i)] == c[static_cast<std::size_t>(i)],
             "c_" + std::to_string(i + 1) + " = " + to_string(sigma[static_cast<std::size_t>(i)]));
  return r;
}

IdentityReport suite_phi_oracle(PhiCache& cache) {
  auto r = make_report("phi-oracle", "semistable strongly connected pointed graphs of weight <= 3, all Gamma_C of a_1..a_3");
  auto check = [&](const PointedGraph& g) {
    const Integer a = phi(g, cache);
    const Integer b = count_strong_reductions(g);
    r.record(a == b, to_compact(g) + ": phi " + to_string(a) + ", reductions " + to_string(b));
  };
  for (int w = 1; w <= 3; ++w)
    for (const auto& g : enumerate_pointed_semistable_strong(w)) check(g);
  std::set<std::string> seen;
  for (int w = 1; w <= 3; ++w)
    for (const auto& g : enumerate_stable(w))
      for (const auto& c : cuttings(g)) {
        const auto gamma = gamma_of_cutting(g, c);
        if (seen.insert(canonical_form(gamma).key).second) check(gamma);
      }
  r.notes.push_back(std::to_string(seen.size()) + " distinct Gamma_C classes");
  return r;
}

IdentityReport suite_duality() {
  auto r = make_report("duality", "(Gamma_C, G') for stable G, G' of equal weight <= 2");
  for (int w = 1; w <= 2; ++w) {
    const auto graphs = enumerate_stable(w);
    std::map<std::string, PointedGraph> gammas;
    for (const auto& g : graphs)
      for (const auto& c : cuttings(g)) {
        auto gamma = gamma_of_cutting(g, c);
        gammas.emplace(canonical_form(gamma).key, std::move(gamma));
      }
    for (const auto& [key, gamma] : gammas)
      for (const auto& g : graphs) {
        const auto check = verify_pairing_cutting_duality(gamma, g);
        r.record(check.holds(), key + " vs " + to_compact(g) + ": " + to_string(check.pairing_side) +
                                    " != " + to_string(check.cutting_side));
      }
  }
  return r;
}

IdentityReport suite_multiplicativity(PhiCache& cache) {
  auto r = make_report("multiplicativity", "unordered pairs of connected stable graphs of weight <= 2");
  std::vector<MultiDigraph> connected;
  for (int w = 1; w <= 2; ++w)
    for (const auto& g : enumerate_stable(w))
      if (component_count(g) == 1) connected.push_back(g);
  for (std::size_t i = 0; i < connected.size(); ++i)
    for (std::size_t j = i; j < connected.size(); ++j) {
      const auto u = disjoint_union(connected[i], connected[j]);
      const Rational sym = i == j ? 2 : 1;
      const Rational lhs = z_coefficient(u, cache);
      const Rational rhs = z_coefficient(connected[i], cache) * z_coefficient(connected[j], cache) / sym;
      r.record(lhs == rhs, to_compact(u) + ": " + to_string(lhs) + " vs " + to_string(rhs));
      r.record(z_from_components(u, cache) == lhs, to_compact(u) + ": component product disagrees");
    }
  const Rational z2 = z_coefficient(MultiDigraph::from_rows({{2}}), cache);
  const Rational z_tau1 = z_coefficient(tau_graph(1), cache);
  r.record(z_tau1 == z2 * z2 * z2 / 6 && z_tau1 == Rational(-1, 162), "z(tau_1) = " + to_string(z_tau1));
  return r;
}

IdentityReport suite_identities() {
  auto r = make_report("identities", "pairing: parts <= 4, d <= 4, l <= 6; alternating: 1 <= m <= w <= 8, 0 <= d <= 5");
  for (int d = 1; d <= 4; ++d) {
    std::vector<int> parts(static_cast<std::size_t>(d), 0);
    std::function<void(int)> rec = [&](int pos) {
      if (pos == d) {
        for (int l = 0; l <= 6; ++l)
          r.record(lemma_pairing_identity(parts, l), "pairing m=[" + join(parts) + "] l=" + std::to_string(l));
        return;
      }
      for (int a = 0; a <= 4; ++a) {
        parts[static_cast<std::size_t>(pos)] = a;
        rec(pos + 1);
      }
    };
    rec(0);
  }
  for (int w = 1; w <= 8; ++w)
    for (int m = 1; m <= w; ++m)
      for (int d = 0; d <= 5; ++d) {
        const Integer v = lemma_alternating_sum(m, w, d);
        r.record(v == sign_power(m), "alternating m=" + std::to_string(m) + " w=" + std::to_string(w) +
                                         " d=" + std::to_string(d) + " gives " + to_string(v));
      }
  return r;
}

std::string label(int d, std::uint64_t seed) { return "d=" + std::to_string(d) + " seed=" + std::to_string(seed); }

IdentityReport suite_curvature(const SuiteOptions& o, PhiCache& cache) {
  auto r = make_report("curvature", "N=" + std::to_string(o.order) + ", " + std::to_string(o.seeds) +
                                    " seeds from " + std::to_string(o.first_seed));
  const auto a1 = heat_coefficient(1, cache);
  const auto a2 = heat_coefficient(2, cache);
  const auto a3 = heat_coefficient(3, cache);
  const auto c = tau_to_sigma(a3);
  const auto a1_graph = MultiDigraph::from_rows({{2}});
  for (int d : dims_or(o, {1, 2, 3}))
    for (int s = 0; s < o.seeds; ++s) {
      const std::uint64_t seed = o.first_seed + static_cast<std::uint64_t>(s);
      const auto phi = KahlerPotential::random(d, o.order, seed);
      const KahlerGeometry geo(phi);
      const auto ci = complex_invariants(geo);
      const auto ri = real_invariants(phi);
      const GR graph = evaluate_sum(a1, phi);
      r.record(graph == q(-1, 3) * evaluate_graph(a1_graph, phi) && graph == q(1, 3) * ci.scalar &&
                   graph == q(1, 6) * ri.scalar,
               label(d, seed) + ": a_1 graph value " + to_string(graph));
      const GR lhs = evaluate_sum(a2, phi);
      const GR kahler = q(2, 15) * ci.box_scalar + q(1, 18) * ci.scalar * ci.scalar - q(1, 90) * ci.ricci_norm +
                        q(1, 45) * ci.riemann_norm;
      const GR real = q(-1, 30) * ri.scalar_laplacian + q(1, 72) * ri.scalar * ri.scalar -
                      q(1, 180) * ri.ricci_norm + q(1, 180) * ri.riemann_norm;
      r.record(lhs == kahler, label(d, seed) + ": a_2 graph sum " + to_string(lhs) + " vs Kahler " + to_string(kahler));
      r.record(lhs == real, label(d, seed) + ": a_2 graph sum " + to_string(lhs) + " vs real " + to_string(real));
      if (d < 2 && o.dims.empty()) continue;
      std::array<GR, kSigmaCount> sigma;
      for (int k = 1; k <= kSigmaCount; ++k) sigma[static_cast<std::size_t>(k - 1)] = geo.sigma(k);
      for (int i = 1; i <= kSigmaCount; ++i) {
        const auto row = tau_sigma_row(i);
        GR rhs;
        for (int j = 0; j < kSigmaCount; ++j) rhs += GR(row[static_cast<std::size_t>(j)]) * sigma[static_cast<std::size_t>(j)];
        const GR value = evaluate_graph(tau_graph(i), phi);
        r.record(value == rhs, label(d, seed) + ": tau_" + std::to_string(i) + " = " + to_string(value) +
                                   ", sigma row gives " + to_string(rhs));
      }
      GR by_sigma;
      for (int j = 0; j < kSigmaCount; ++j) by_sigma += GR(c[static_cast<std::size_t>(j)]) * sigma[static_cast<std::size_t>(j)];
      const GR by_graph = evaluate_sum(a3, phi);
      r.record(by_graph == by_sigma,
               label(d, seed) + ": a_3 graph sum " + to_string(by_graph) + " vs sigma sum " + to_string(by_sigma));
    }
  return r;
}

IdentityReport suite_appendix(const SuiteOptions& o) {
  auto r = make_report("appendix", "N=" + std::to_string(o.order) + ", " + std::to_string(o.seeds) + " seeds from " +
                                   std::to_string(o.first_seed));
  for (int d : dims_or(o, {1, 2, 3}))
    for (int s = 0; s < o.seeds; ++s) {
      const std::uint64_t seed = o.first_seed + static_cast<std::uint64_t>(s);
      const auto phi = KahlerPotential::random(d, o.order, seed);
      const auto ci = complex_invariants(KahlerGeometry(phi));
      const auto ri = real_invariants(phi);
      r.record(ri.scalar == GR(2) * ci.scalar, label(d, seed) + ": P = " + to_string(ri.scalar) + ", rho = " + to_string(ci.scalar));
      r.record(ri.ricci_norm == GR(2) * ci.ricci_norm,
               label(d, seed) + ": |Ric|^2 real " + to_string(ri.ricci_norm) + ", complex " + to_string(ci.ricci_norm));
      r.record(ri.riemann_norm == GR(4) * ci.riemann_norm,
               label(d, seed) + ": |R|^2 real " + to_string(ri.riemann_norm) + ", complex " + to_string(ci.riemann_norm));
    }
  return r;
}

}  // namespace

IdentityReport run_suite(const std::string& name, const SuiteOptions& options, PhiCache& cache) {
  if (options.seeds < 1) throw std::invalid_argument("at least one seed is required");
  if (name == "table1") return suite_table1(cache);
  if (name == "coefficients") return suite_coefficients(cache);
  if (name == "phi-oracle") return suite_phi_oracle(cache);
  if (name == "duality") return suite_duality();
  if (name == "multiplicativity") return suite_multiplicativity(cache);
  if (name == "identities") return suite_identities();
  if (name == "curvature") return suite_curvature(options, cache);
  if (name == "appendix") return suite_appendix(options);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

IdentityReport run_suite(const std::string& name) {
  PhiCache cache;
  return run_suite(name, SuiteOptions{}, cache);
}

}  // namespace kheat
