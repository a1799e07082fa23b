#pragma once

// Random test functions as jets.

#include <cstdint>
#include <functional>
#include <random>

#include "kheat/jet.hpp"

namespace testjets {

using kheat::Exponent;
using kheat::GaussianRational;
using kheat::Jet;
using kheat::Rational;

inline void for_each_exponent(int dim, int max_degree, const std::function<void(const Exponent&)>& visit) {
  Exponent e{std::vector<int>(static_cast<std::size_t>(dim), 0), std::vector<int>(static_cast<std::size_t>(dim), 0)};
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == 2 * dim) {
      visit(e);
      return;
    }
    auto& slot = var < dim ? e.alpha[static_cast<std::size_t>(var)] : e.beta[static_cast<std::size_t>(var - dim)];
    for (int k = 0; k <= left; ++k) {
      slot = k;
      rec(var + 1, left - k);
    }
    slot = 0;
  };
  rec(0, max_degree);
}

/// Dense polynomial with small Gaussian rational coefficients, known to `order`.
inline Jet random_jet(int dim, int order, std::uint64_t seed, bool real_valued = false) {
  std::mt19937_64 rng(seed);
  auto small = [&] {
    Rational q(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
    q.canonicalize();
    return q;
  };
  Jet f(dim, order);
  for_each_exponent(dim, order, [&](const Exponent& e) { f.add_term(e, GaussianRational(small(), small())); });
  if (real_valued) {
    f += f.conj();
  }
  return f;
}

}  // namespace testjets
