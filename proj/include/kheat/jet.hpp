#pragma once

// Truncated power series in z_1..z_d, zbar_1..zbar_d with exact Gaussian
// rational coefficients, and dense tensors of them.

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kheat/arith.hpp"

namespace kheat {

struct GaussianRational {
  Rational re = 0;
  Rational im = 0;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int r) : re(r) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussianRational conj() const { return {re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  /// Throws std::domain_error on division by zero.
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }

  static GaussianRational i() { return {0, 1}; }
};

/// "3/2", "-1/3i", "1 + 2i".
std::string to_string(const GaussianRational& z);

/// Raised when a value needs more Taylor coefficients than were kept.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int required_order)
      : std::runtime_error(what), required_order_(required_order) {}
  int required_order() const { return required_order_; }

 private:
  int required_order_;
};

inline constexpr int kMaxJetDimension = 4;
inline constexpr int kMaxJetOrder = 15;

/// Multi-index over the 2d variables: alpha for z, beta for zbar.
struct Exponent {
  std::vector<int> alpha;
  std::vector<int> beta;
  int degree() const;
};

/// Polynomial truncated above total degree `order`: every coefficient of
/// degree <= order is exact, higher ones are unknown. Arithmetic propagates
/// the order (products and sums keep the smaller one, derivatives lose one),
/// so reading a coefficient that was never known raises TruncationError.
class Jet {
 public:
  using Key = std::uint64_t;
  using Term = std::pair<Key, GaussianRational>;

  Jet() = default;
  Jet(int dim, int order);
  static Jet constant(int dim, int order, const GaussianRational& c);
  /// z_i (conjugate = false) or zbar_i.
  static Jet variable(int dim, int order, int i, bool conjugate);

  int dim() const { return dim_; }
  int order() const { return order_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Key key(const Exponent& e) const;
  Exponent exponent(Key k) const;
  static int degree(Key k) { return static_cast<int>(k >> 56); }

  /// Throws TruncationError if the degree exceeds the order.
  GaussianRational coefficient(const Exponent& e) const;
  GaussianRational value() const;  // at the origin
  void add_term(const Exponent& e, const GaussianRational& c);

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const GaussianRational& c);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= GaussianRational(-1); }
  friend Jet operator*(Jet a, const GaussianRational& c) { return a *= c; }
  friend Jet operator*(const GaussianRational& c, Jet a) { return a *= c; }
  friend Jet operator*(const Jet& a, const Jet& b) { return multiply(a, b); }
  static Jet multiply(const Jet& a, const Jet& b);

  /// d/dz_i and d/dzbar_i.
  Jet d(int i) const;
  Jet dbar(int i) const;
  /// Complex conjugate of the function: swaps z and zbar exponents.
  Jet conj() const;
  Jet truncated(int order) const;
  /// coeff(alpha, beta) == conj(coeff(beta, alpha)) for every term.
  bool is_real() const;

  /// Equality on the common range of known coefficients.
  friend bool operator==(const Jet& a, const Jet& b);

 private:
  Jet derivative(int var) const;
  void check_compatible(const Jet& o) const;
  void merge(const Jet& o, bool subtract);

  int dim_ = 0;
  int order_ = -1;
  std::vector<Term> terms_;  // sorted by key, no zero coefficients
};

enum class Slot { Unbarred, Barred };

/// Dense covariant tensor with one jet per component. Components are laid
/// out row-major over the slots, each index in 0..d-1.
class TensorJet {
 public:
  TensorJet() = default;
  TensorJet(int dim, std::vector<Slot> slots, int order);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return components_.size(); }

  Jet& operator[](std::size_t flat) { return components_[flat]; }
  const Jet& operator[](std::size_t flat) const { return components_[flat]; }
  Jet& at(std::initializer_list<int> idx) { return components_[flat(idx.begin(), idx.size())]; }
  const Jet& at(std::initializer_list<int> idx) const { return components_[flat(idx.begin(), idx.size())]; }
  Jet& at(const std::vector<int>& idx) { return components_[flat(idx.data(), idx.size())]; }
  const Jet& at(const std::vector<int>& idx) const { return components_[flat(idx.data(), idx.size())]; }

  std::vector<int> unflatten(std::size_t flat) const;

 private:
  std::size_t flat(const int* idx, std::size_t count) const;

  int dim_ = 0;
  std::vector<Slot> slots_;
  std::vector<Jet> components_;
};

}  // namespace kheat
