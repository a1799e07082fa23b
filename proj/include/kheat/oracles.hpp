#pragma once

// Combinatorial identity checkers and the verification suites behind
// `kheat verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kheat/arith.hpp"
#include "kheat/digraph.hpp"
#include "kheat/phi.hpp"

namespace kheat {

/// sum over a_1 + ... + a_d = l of prod_j C(m_j + a_j, m_j), compared with
/// C(l + m + d - 1, m + d - 1), m = sum m_j, d = m_parts.size() >= 1.
bool lemma_pairing_identity(const std::vector<int>& m_parts, int l);
Integer pairing_identity_lhs(const std::vector<int>& m_parts, int l);

/// sum_{j=m}^{w} (-1)^j C(w+d, j+d) C(j+d-1, m+d-1); equals (-1)^m.
/// Throws std::invalid_argument unless w >= m >= 1 and d >= 0.
Integer lemma_alternating_sum(int m, int w, int d);

struct Table1Entry {
  std::string compact;  // vertex 0 is the point
  Integer phi;
};

/// The twelve strongly connected pointed graphs of weight <= 3 with their
/// reference phi values.
const std::vector<Table1Entry>& table1();

struct IdentityReport {
  std::string name;
  std::string parameters;
  bool passed = true;
  long long checked = 0;
  long long matched = 0;
  std::optional<std::string> counterexample;  // set iff !passed
  std::vector<std::string> notes;

  /// Records one check; the first failure becomes the counterexample.
  void record(bool ok, const std::string& what);
  std::string summary() const;  // "table1: PASS 12/12"
  std::string to_text() const;
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::vector<int> dims;  // empty: the suite's default dimensions
  int seeds = 5;
  std::uint64_t first_seed = 1;
  int order = 8;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
IdentityReport run_suite(const std::string& name, const SuiteOptions& options, PhiCache& cache);
IdentityReport run_suite(const std::string& name);

}  // namespace kheat
