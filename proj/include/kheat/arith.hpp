#pragma once

// Exact integer and rational arithmetic shared by every module.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace kheat {

using Integer = mpz_class;
using Rational = mpq_class;

Integer factorial(long n);

/// C(n, k); zero outside 0 <= k <= n.
Integer binomial(long n, long k);

/// "p/q" in lowest terms with q > 0; integers omit the "/1".
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts "p", "p/q", with optional sign. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

inline int sign_power(long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace kheat
