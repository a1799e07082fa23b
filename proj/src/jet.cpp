#include "kheat/jet.hpp"

#include <algorithm>
#include <unordered_map>

namespace kheat {

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  const Rational norm = o.re * o.re + o.im * o.im;
  if (norm == 0) throw std::domain_error("division by zero");
  *this *= o.conj();
  re /= norm;
  im /= norm;
  return *this;
}

std::string to_string(const GaussianRational& z) {
  if (z.im == 0) return to_string(z.re);
  if (z.re == 0) return to_string(z.im) + "i";
  return to_string(z.re) + (z.im < 0 ? " - " : " + ") + to_string(abs(z.im)) + "i";
}

int Exponent::degree() const {
  int s = 0;
  for (int a : alpha) s += a;
  for (int b : beta) s += b;
  return s;
}

namespace {

constexpr int kBits = 4;
constexpr Jet::Key kDegreeUnit = Jet::Key{1} << 56;

Jet::Key unit(int var) { return (Jet::Key{1} << (kBits * var)) + kDegreeUnit; }

int exponent_of(Jet::Key k, int var) { return static_cast<int>((k >> (kBits * var)) & 0xF); }

// Fused c += a * b without allocating a temporary GaussianRational.
void multiply_add(GaussianRational& c, const GaussianRational& a, const GaussianRational& b, Rational& scratch) {
  scratch = a.re * b.re;
  c.re += scratch;
  if (a.im != 0 && b.im != 0) {
    scratch = a.im * b.im;
    c.re -= scratch;
  }
  if (b.im != 0) {
    scratch = a.re * b.im;
    c.im += scratch;
  }
  if (a.im != 0) {
    scratch = a.im * b.re;
    c.im += scratch;
  }
}

}  // namespace

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > kMaxJetDimension)
    throw std::invalid_argument("jet dimension must be in 1.." + std::to_string(kMaxJetDimension));
  if (order > kMaxJetOrder) throw std::invalid_argument("jet order above " + std::to_string(kMaxJetOrder));
}

Jet Jet::constant(int dim, int order, const GaussianRational& c) {
  Jet j(dim, order);
  if (order >= 0 && !c.is_zero()) j.terms_.emplace_back(0, c);
  return j;
}

Jet Jet::variable(int dim, int order, int i, bool conjugate) {
  Jet j(dim, order);
  if (i < 0 || i >= dim) throw std::out_of_range("variable index out of range");
  if (order >= 1) j.terms_.emplace_back(unit(conjugate ? dim + i : i), GaussianRational(1));
  return j;
}

Jet::Key Jet::key(const Exponent& e) const {
  if (static_cast<int>(e.alpha.size()) != dim_ || static_cast<int>(e.beta.size()) != dim_)
    throw std::invalid_argument("exponent length does not match jet dimension");
  Key k = 0;
  for (int v = 0; v < 2 * dim_; ++v) {
    const int p = v < dim_ ? e.alpha[static_cast<std::size_t>(v)] : e.beta[static_cast<std::size_t>(v - dim_)];
    if (p < 0) throw std::invalid_argument("negative exponent");
    if (p > kMaxJetOrder) throw std::invalid_argument("exponent above the maximal jet order");
    k += static_cast<Key>(p) * unit(v);
  }
  return k;
}

Exponent Jet::exponent(Key k) const {
  Exponent e;
  for (int v = 0; v < dim_; ++v) e.alpha.push_back(exponent_of(k, v));
  for (int v = 0; v < dim_; ++v) e.beta.push_back(exponent_of(k, dim_ + v));
  return e;
}

GaussianRational Jet::coefficient(const Exponent& e) const {
  const int deg = e.degree();
  if (deg > order_)
    throw TruncationError("coefficient of degree " + std::to_string(deg) + " requested from a jet of order " +
                              std::to_string(order_),
                          deg);
  const Key k = key(e);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term& t, Key x) { return t.first < x; });
  return it != terms_.end() && it->first == k ? it->second : GaussianRational();
}

GaussianRational Jet::value() const {
  if (order_ < 0) throw TruncationError("value at the origin requested from a jet with no known terms", 0);
  return !terms_.empty() && terms_.front().first == 0 ? terms_.front().second : GaussianRational();
}

void Jet::add_term(const Exponent& e, const GaussianRational& c) {
  if (e.degree() > order_) return;
  Jet single(dim_, order_);
  if (!c.is_zero()) single.terms_.emplace_back(key(e), c);
  *this += single;
}

void Jet::check_compatible(const Jet& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("jet dimensions differ");
}

void Jet::merge(const Jet& o, bool subtract) {
  check_compatible(o);
  const int order = std::min(order_, o.order_);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  auto keep = [&](Key k) { return degree(k) <= order; };
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      if (keep(a->first)) out.push_back(std::move(*a));
      ++a;
    } else if (a == terms_.end() || b->first < a->first) {
      if (keep(b->first)) out.emplace_back(b->first, subtract ? -b->second : b->second);
      ++b;
    } else {
      if (keep(a->first)) {
        GaussianRational c = subtract ? a->second - b->second : a->second + b->second;
        if (!c.is_zero()) out.emplace_back(a->first, std::move(c));
      }
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  order_ = order;
}

Jet& Jet::operator+=(const Jet& o) {
  merge(o, false);
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  merge(o, true);
  return *this;
}

Jet& Jet::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

Jet Jet::multiply(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  Jet out(a.dim_, std::min(a.order_, b.order_));
  if (a.terms_.empty() || b.terms_.empty()) return out;
  std::unordered_map<Key, GaussianRational> acc;
  Rational scratch;
  for (const auto& [ka, ca] : a.terms_) {
    const int da = degree(ka);
    if (da > out.order_) break;  // terms are sorted by degree first
    for (const auto& [kb, cb] : b.terms_) {
      if (da + degree(kb) > out.order_) break;
      multiply_add(acc[ka + kb], ca, cb, scratch);
    }
  }
  out.terms_.reserve(acc.size());
  for (auto& [k, c] : acc)
    if (!c.is_zero()) out.terms_.emplace_back(k, std::move(c));
  std::sort(out.terms_.begin(), out.terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  return out;
}

Jet Jet::derivative(int var) const {
  Jet out(dim_, order_ - 1);
  const Key u = unit(var);
  for (const auto& [k, c] : terms_) {
    const int p = exponent_of(k, var);
    if (p == 0) continue;
    out.terms_.emplace_back(k - u, c * GaussianRational(p));
  }
  return out;
}

Jet Jet::d(int i) const {
  if (i < 0 || i >= dim_) throw std::out_of_range("derivative index out of range");
  return derivative(i);
}

Jet Jet::dbar(int i) const {
  if (i < 0 || i >= dim_) throw std::out_of_range("derivative index out of range");
  return derivative(dim_ + i);
}

Jet Jet::conj() const {
  Jet out(dim_, order_);
  for (const auto& [k, c] : terms_) {
    const Key low_mask = (Key{1} << (kBits * dim_)) - 1;
    const Key alpha = k & low_mask;
    const Key beta = (k >> (kBits * dim_)) & low_mask;
    const Key swapped = (k & ~((Key{1} << (2 * kBits * dim_)) - 1)) | beta | (alpha << (kBits * dim_));
    out.terms_.emplace_back(swapped, c.conj());
  }
  std::sort(out.terms_.begin(), out.terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  return out;
}

Jet Jet::truncated(int order) const {
  Jet out(dim_, std::min(order, order_));
  for (const auto& t : terms_)
    if (degree(t.first) <= out.order_) out.terms_.push_back(t);
  return out;
}

bool Jet::is_real() const { return *this == conj(); }

bool operator==(const Jet& a, const Jet& b) {
  if (a.dim_ != b.dim_) return false;
  const int order = std::min(a.order_, b.order_);
  return a.truncated(order).terms_ == b.truncated(order).terms_;
}

TensorJet::TensorJet(int dim, std::vector<Slot> slots, int order) : dim_(dim), slots_(std::move(slots)) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < slots_.size(); ++i) count *= static_cast<std::size_t>(dim);
  components_.assign(count, Jet(dim, order));
}

std::size_t TensorJet::flat(const int* idx, std::size_t count) const {
  if (count != slots_.size()) throw std::invalid_argument("tensor index has the wrong number of slots");
  std::size_t f = 0;
  for (std::size_t s = 0; s < count; ++s) {
    if (idx[s] < 0 || idx[s] >= dim_) throw std::out_of_range("tensor index out of range");
    f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx[s]);
  }
  return f;
}

std::vector<int> TensorJet::unflatten(std::size_t flat) const {
  std::vector<int> idx(slots_.size());
  for (std::size_t s = slots_.size(); s-- > 0;) {
    idx[s] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
  return idx;
}

}  // namespace kheat
