#include "kheat/heat.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kheat/serialize.hpp"

namespace kheat {

int Cutting::cut_count() const {
  int m = 0;
  for (const auto& e : entries) m += e.cut;
  return m;
}

Integer Cutting::multiplicity() const {
  Integer mult = 1;
  for (const auto& e : entries) mult *= binomial(e.multiplicity, e.cut);
  return mult;
}

std::vector<Cutting> cuttings(const MultiDigraph& g) {
  Cutting base;
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v = 0; v < g.vertex_count(); ++v)
      if (g(u, v) > 0) base.entries.push_back({u, v, g(u, v), 0});
  std::vector<Cutting> out;
  // Odometer over cut counts.
  Cutting current = base;
  while (true) {
    out.push_back(current);
    std::size_t i = 0;
    for (; i < current.entries.size(); ++i) {
      auto& e = current.entries[i];
      if (e.cut < e.multiplicity) {
        ++e.cut;
        break;
      }
      e.cut = 0;
    }
    if (i == current.entries.size()) break;
  }
  return out;
}

PointedGraph gamma_of_cutting(const MultiDigraph& g, const Cutting& c) {
  const int n = g.vertex_count();
  MultiDigraph h(n + 1);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g(u, v)) h.add_edges(u + 1, v + 1, g(u, v));
  for (const auto& e : c.entries) {
    if (e.cut < 0 || e.cut > e.multiplicity || e.from < 0 || e.to < 0 || e.from >= n || e.to >= n ||
        g(e.from, e.to) != e.multiplicity)
      throw std::invalid_argument("cutting does not match the graph");
    if (e.cut == 0) continue;
    h.remove_edges(e.from + 1, e.to + 1, e.cut);
    h.add_edges(e.from + 1, 0, e.cut);
    h.add_edges(0, e.to + 1, e.cut);
  }
  return PointedGraph(std::move(h));
}

namespace {

Rational cutting_term(const MultiDigraph& g, const Cutting& c, PhiCache& cache) {
  const int w = g.weight();
  const int m = c.cut_count();
  if (m + w < 0) throw std::invalid_argument("cutting sum needs m(C) + w(G) >= 0");
  const Integer ph = phi(gamma_of_cutting(g, c), cache);
  if (ph == 0) return 0;
  Rational t(c.multiplicity() * ph * sign_power(m), factorial(m + w));
  t.canonicalize();
  return t;
}

Rational z_prefactor(const MultiDigraph& g) {
  const int w = g.weight();
  Integer two_w = 1;
  mpz_mul_2exp(two_w.get_mpz_t(), two_w.get_mpz_t(), static_cast<mp_bitcnt_t>(std::abs(w)));
  Rational pre = w >= 0 ? Rational(two_w, aut_order(g)) : Rational(1, two_w * aut_order(g));
  pre.canonicalize();
  return pre * sign_power(g.vertex_count());
}

Rational z_serial_impl(const MultiDigraph& g, PhiCache& cache) {
  Rational sum = 0;
  for (const auto& c : cuttings(g)) sum += cutting_term(g, c, cache);
  return z_prefactor(g) * sum;
}

}  // namespace

Rational z_coefficient(const MultiDigraph& g, PhiCache& cache) {
  const auto cs = cuttings(g);
  std::vector<Rational> terms(cs.size());
  const long long count = static_cast<long long>(cs.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i)
    terms[static_cast<std::size_t>(i)] = cutting_term(g, cs[static_cast<std::size_t>(i)], cache);
  Rational sum = 0;
  for (const auto& t : terms) sum += t;
  return z_prefactor(g) * sum;
}

Rational z_coefficient(const MultiDigraph& g) {
  PhiCache cache;
  return z_coefficient(g, cache);
}

Rational z_from_components(const MultiDigraph& g, PhiCache& cache) {
  std::map<std::string, std::pair<MultiDigraph, int>> classes;
  for (auto& comp : connected_components(g)) {
    auto key = canonical_form(comp).key;
    auto [it, fresh] = classes.emplace(key, std::make_pair(comp, 0));
    ++it->second.second;
  }
  Rational z = 1;
  for (const auto& [key, entry] : classes) {
    const Rational zc = z_coefficient(entry.first, cache);
    for (int i = 0; i < entry.second; ++i) z *= zc;
    z /= Rational(factorial(entry.second));
  }
  return z;
}

GraphSum<MultiDigraph> heat_coefficient(int n, PhiCache& cache, int bound) {
  const auto graphs = enumerate_stable(n, bound);
  std::vector<Rational> z(graphs.size());
  const long long count = static_cast<long long>(graphs.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i)
    z[static_cast<std::size_t>(i)] = z_serial_impl(graphs[static_cast<std::size_t>(i)], cache);
  GraphSum<MultiDigraph> sum;
  for (std::size_t i = 0; i < graphs.size(); ++i) sum.add(graphs[i], z[i]);
  return sum;
}

namespace serial {

Rational z_coefficient(const MultiDigraph& g, PhiCache& cache) { return z_serial_impl(g, cache); }

GraphSum<MultiDigraph> heat_coefficient(int n, PhiCache& cache, int bound) {
  GraphSum<MultiDigraph> sum;
  for (const auto& g : kheat::serial::enumerate_stable(n, bound)) sum.add(g, z_serial_impl(g, cache));
  return sum;
}

}  // namespace serial

// ---------------------------------------------------------------------------

std::vector<PairingResult> pairings(const PointedGraph& g) {
  if (g(0, 0) != 0) throw std::invalid_argument("pairings require no loops at the point");
  const auto d = degrees(g, 0);
  if (d.out != d.in) throw std::invalid_argument("pairings require equal in- and out-degree at the point");
  const int n = g.vertex_count();
  std::vector<int> outgoing, incoming;  // ordinary endpoints, shifted to G_P labels
  for (int v = 1; v < n; ++v) {
    for (int k = 0; k < g(v, 0); ++k) outgoing.push_back(v - 1);
    for (int k = 0; k < g(0, v); ++k) incoming.push_back(v - 1);
  }
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);
  const MultiDigraph base = relabeled(g.graph(), rest);

  std::vector<PairingResult> out;
  std::vector<int> target(outgoing.size());
  std::iota(target.begin(), target.end(), 0);
  do {
    MultiDigraph gp = base;
    for (std::size_t i = 0; i < target.size(); ++i)
      gp.add_edges(outgoing[i], incoming[static_cast<std::size_t>(target[i])]);
    out.push_back({Pairing{target}, std::move(gp)});
  } while (std::next_permutation(target.begin(), target.end()));
  return out;
}

DualityCheck verify_pairing_cutting_duality(const PointedGraph& gamma, const MultiDigraph& g) {
  if (gamma(0, 0) != 0) throw std::invalid_argument("duality check requires no loops at the point");
  DualityCheck check;
  const auto g_key = canonical_form(g);
  const auto gamma_key = canonical_form(gamma);

  Integer matching_pairings = 0;
  const auto d = degrees(gamma, 0);
  if (d.out == d.in) {
    for (const auto& p : pairings(gamma))
      if (canonical_form(p.graph) == g_key) ++matching_pairings;
  }
  check.pairing_side = Rational(matching_pairings, aut_order(gamma));
  check.pairing_side.canonicalize();

  Integer matching_cuttings = 0;
  for (const auto& c : cuttings(g))
    if (canonical_form(gamma_of_cutting(g, c)) == gamma_key) matching_cuttings += c.multiplicity();
  check.cutting_side = Rational(matching_cuttings, aut_order(g));
  check.cutting_side.canonicalize();
  return check;
}

// ---------------------------------------------------------------------------

MultiDigraph tau_graph(int index) {
  switch (index) {
    case 1: return MultiDigraph::from_rows({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}});
    case 2: return MultiDigraph::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 2}});
    case 3: return MultiDigraph::from_rows({{0, 2, 0}, {2, 0, 0}, {0, 0, 2}});
    case 4: return MultiDigraph::from_rows({{0, 1, 1}, {1, 1, 0}, {1, 0, 1}});
    case 5: return MultiDigraph::from_rows({{0, 1, 1}, {0, 1, 1}, {2, 0, 0}});
    case 6: return MultiDigraph::from_rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    case 7: return MultiDigraph::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    case 8: return MultiDigraph::from_rows({{2, 0}, {0, 3}});
    case 9: return MultiDigraph::from_rows({{1, 1}, {1, 2}});
    case 10: return MultiDigraph::from_rows({{1, 2}, {2, 0}});
    case 11: return MultiDigraph::from_rows({{2, 1}, {0, 2}});
    case 12: return MultiDigraph::from_rows({{1, 1}, {2, 1}});
    case 13: return MultiDigraph::from_rows({{0, 3}, {2, 0}});
    case 14: return MultiDigraph::from_rows({{4}});
    case 15: return MultiDigraph::from_rows({{0, 2, 0}, {0, 0, 2}, {2, 0, 0}});
    default: throw std::out_of_range("tau index must be in 1..15");
  }
}

std::array<int, kSigmaCount> tau_sigma_row(int index) {
  std::array<int, kSigmaCount> row{};
  auto set = [&](int sigma, int coeff) { row[static_cast<std::size_t>(sigma - 1)] = coeff; };
  if (index >= 1 && index <= 7) {
    set(index, -1);
    return row;
  }
  switch (index) {
    case 8: set(2, -2), set(3, -1), set(8, 1); break;
    case 9: set(4, -1), set(5, -1), set(6, -1), set(9, 1); break;
    case 10: set(5, -2), set(10, 1), set(15, -1); break;
    case 11: set(11, 1); break;
    case 12: set(12, 1); break;
    case 13: set(13, 1); break;
    case 14:
      set(4, -3), set(5, -12), set(6, -3), set(7, 6), set(9, 7), set(10, 8), set(12, 10), set(13, 3),
          set(14, -1), set(15, -6);
      break;
    case 15: set(15, -1); break;
    default: throw std::out_of_range("tau index must be in 1..15");
  }
  return row;
}

std::optional<int> tau_index(const MultiDigraph& g) {
  static const std::map<std::string, int> keys = [] {
    std::map<std::string, int> m;
    for (int i = 1; i <= kSigmaCount; ++i) m.emplace(canonical_form(tau_graph(i)).key, i);
    return m;
  }();
  if (g.weight() != 3) return std::nullopt;
  auto it = keys.find(canonical_form(g).key);
  if (it == keys.end()) return std::nullopt;
  return it->second;
}

SigmaVector tau_to_sigma(const GraphSum<MultiDigraph>& a3) {
  SigmaVector sigma;
  for (auto& s : sigma) s = 0;
  for (const auto& [key, term] : a3.terms()) {
    const auto idx = tau_index(term.graph);
    if (!idx) throw std::invalid_argument("graph " + key + " is not in the weight-three tau basis");
    const auto row = tau_sigma_row(*idx);
    for (int j = 0; j < kSigmaCount; ++j)
      sigma[static_cast<std::size_t>(j)] += term.coefficient * row[static_cast<std::size_t>(j)];
  }
  return sigma;
}

// ---------------------------------------------------------------------------

Format parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  if (name == "latex") return Format::Latex;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected text, json or latex)");
}

namespace {

std::string index_letter(int e) {
  static const char* letters[] = {"i", "j", "k", "l", "m", "n", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y"};
  constexpr int count = static_cast<int>(std::size(letters));
  if (e < count) return letters[e];
  return std::string("i") + std::to_string(e - count + 1);
}

std::string barred(const std::string& letter, Format format) {
  return format == Format::Latex ? "\\bar " + letter : letter + "bar";
}

std::string latex_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

// Appends " + c X" / " - c X", or "c X" / "-c X" for the first term, with a
// unit coefficient written as just X.
void append_term(std::string& out, const Rational& c, const std::string& body, Format format) {
  const bool negative = c < 0;
  const Rational mag = abs(c);
  if (out.empty()) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  if (mag != 1) {
    out += format == Format::Latex ? latex_rational(mag) : to_string(mag);
    out += body.empty() ? "" : " ";
  } else if (body.empty()) {
    out += "1";
  }
  out += body;
}

}  // namespace

std::string tensor_notation(const MultiDigraph& g, Format format) {
  const int n = g.vertex_count();
  std::vector<std::vector<std::string>> outs(static_cast<std::size_t>(n)), ins(static_cast<std::size_t>(n));
  int next = 0;
  auto assign = [&](int u, int v) {
    for (int k = 0; k < g(u, v); ++k) {
      const auto letter = index_letter(next++);
      outs[static_cast<std::size_t>(u)].push_back(letter);
      ins[static_cast<std::size_t>(v)].push_back(letter);
    }
  };
  for (int v = 0; v < n; ++v) assign(v, v);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) assign(u, v);
  std::string text;
  const std::string sep = format == Format::Latex ? "" : " ";
  for (int v = 0; v < n; ++v) {
    const auto& o = outs[static_cast<std::size_t>(v)];
    const auto& b = ins[static_cast<std::size_t>(v)];
    std::vector<std::string> idx;
    for (std::size_t k = 0; k < std::max(o.size(), b.size()); ++k) {
      if (k < o.size()) idx.push_back(o[k]);
      if (k < b.size()) idx.push_back(barred(b[k], format));
    }
    if (!text.empty()) text += " ";
    text += "g_{";
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k) text += (format == Format::Latex && idx[k].rfind("\\bar", 0) == 0) ? "" : " ";
      text += idx[k];
    }
    text += "}";
  }
  return text;
}

std::string render(const GraphSum<MultiDigraph>& sum, Format format, int weight) {
  if (format == Format::Json) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, term] : sum.terms())
      terms.push_back({{"graph", to_json(term.graph)},
                       {"canonical", key},
                       {"z", to_string(term.coefficient)},
                       {"tensor", tensor_notation(term.graph, Format::Text)}});
    return nlohmann::json{{"weight", weight}, {"terms", terms}}.dump(2);
  }
  std::string out;
  if (format == Format::Latex) {
    // In the tau basis the display lists z_i tau_i in index order.
    bool all_tau = weight == 3 && !sum.empty();
    std::map<int, Rational> by_tau;
    for (const auto& [key, term] : sum.terms()) {
      const auto idx = tau_index(term.graph);
      if (!idx) {
        all_tau = false;
        break;
      }
      by_tau[*idx] = term.coefficient;
    }
    if (all_tau) {
      for (const auto& [i, c] : by_tau) append_term(out, c, "\\tau_{" + std::to_string(i) + "}", format);
    } else {
      for (const auto& [key, term] : sum.terms())
        append_term(out, term.coefficient, tensor_notation(term.graph, format), format);
    }
    return "a_{" + std::to_string(weight) + "} = " + (out.empty() ? "0" : out);
  }
  for (const auto& [key, term] : sum.terms())
    append_term(out, term.coefficient, tensor_notation(term.graph, format), format);
  return out.empty() ? "0" : out;
}

std::string render(const SigmaVector& sigma, Format format) {
  if (format == Format::Json) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : sigma) coeffs.push_back(to_string(c));
    return nlohmann::json{{"basis", "sigma"}, {"coefficients", coeffs}}.dump(2);
  }
  std::string out;
  for (int i = 0; i < kSigmaCount; ++i) {
    const auto& c = sigma[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const std::string name =
        format == Format::Latex ? "\\sigma_{" + std::to_string(i + 1) + "}" : "sigma_" + std::to_string(i + 1);
    append_term(out, c, name, format);
  }
  if (format == Format::Latex) return "a_{3} = " + (out.empty() ? "0" : out);
  return out.empty() ? "0" : out;
}

GraphSum<MultiDigraph> graph_sum_from_json(const std::string& text) {
  GraphSum<MultiDigraph> sum;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& t : j.at("terms")) {
      const auto parsed = graph_from_json(t.at("graph"));
      sum.add(parsed.graph, parse_rational(t.at("z").get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed coefficient JSON: ") + e.what());
  }
  return sum;
}

}  // namespace kheat
