#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace kauction {

// Largest derivative order a jet can carry. Keeps storage fixed and the
// Taylor recurrences well inside double range.
inline constexpr std::size_t kMaxJetOrder = 12;

// Truncated Taylor series of a function g around a fixed expansion point:
// coeff(i) = g^(i)(anchor) / i!. All arithmetic truncates at the common
// order. Operands must share anchor and order; mixing them is an error,
// not a silent promotion.
class Jet {
public:
  Jet(double anchor, std::size_t order) : anchor_(anchor), size_(order + 1) {
    if (order > kMaxJetOrder)
      throw std::domain_error("jet order exceeds cap of 12");
    coeffs_.fill(0.0);
  }

  // Seed of the independent variable at u: (u, 1, 0, ..., 0).
  static Jet variable(double u, std::size_t order) {
    Jet j(u, order);
    j.coeffs_[0] = u;
    if (order >= 1) j.coeffs_[1] = 1.0;
    return j;
  }

  static Jet constant(double c, double anchor, std::size_t order) {
    Jet j(anchor, order);
    j.coeffs_[0] = c;
    return j;
  }

  double anchor() const { return anchor_; }
  std::size_t order() const { return size_ - 1; }

  double coeff(std::size_t i) const { return coeffs_[i]; }
  double& coeff(std::size_t i) { return coeffs_[i]; }

  double value() const { return coeffs_[0]; }

  // g^(i)(anchor), recovered from the normalized coefficient.
  double derivative(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("jet derivative order out of range");
    double fact = 1.0;
    for (std::size_t j = 2; j <= i; ++j) fact *= static_cast<double>(j);
    return coeffs_[i] * fact;
  }

  bool all_finite() const {
    for (std::size_t i = 0; i < size_; ++i)
      if (!std::isfinite(coeffs_[i])) return false;
    return true;
  }

private:
  double anchor_;
  std::size_t size_;
  std::array<double, kMaxJetOrder + 1> coeffs_;
};

namespace detail {
inline void require_compatible(const Jet& a, const Jet& b) {
  if (a.order() != b.order() || a.anchor() != b.anchor())
    throw std::invalid_argument("jet operands must share anchor and order");
}
}  // namespace detail

inline Jet operator+(const Jet& a, const Jet& b) {
  detail::require_compatible(a, b);
  Jet r(a.anchor(), a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) r.coeff(i) = a.coeff(i) + b.coeff(i);
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  detail::require_compatible(a, b);
  Jet r(a.anchor(), a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) r.coeff(i) = a.coeff(i) - b.coeff(i);
  return r;
}

inline Jet operator-(const Jet& a) {
  Jet r(a.anchor(), a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) r.coeff(i) = -a.coeff(i);
  return r;
}

// Cauchy product, truncated at the common order.
inline Jet operator*(const Jet& a, const Jet& b) {
  detail::require_compatible(a, b);
  Jet r(a.anchor(), a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += a.coeff(j) * b.coeff(i - j);
    r.coeff(i) = acc;
  }
  return r;
}

// Series division; requires a nonzero constant term in the divisor.
inline Jet operator/(const Jet& a, const Jet& b) {
  detail::require_compatible(a, b);
  if (b.coeff(0) == 0.0)
    throw std::domain_error("jet division by series with zero constant term");
  Jet r(a.anchor(), a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) {
    double acc = a.coeff(i);
    for (std::size_t j = 0; j < i; ++j) acc -= r.coeff(j) * b.coeff(i - j);
    r.coeff(i) = acc / b.coeff(0);
  }
  return r;
}

inline Jet operator+(const Jet& a, double c) {
  Jet r = a;
  r.coeff(0) += c;
  return r;
}
inline Jet operator+(double c, const Jet& a) { return a + c; }

inline Jet operator-(const Jet& a, double c) { return a + (-c); }
inline Jet operator-(double c, const Jet& a) { return (-a) + c; }

inline Jet operator*(const Jet& a, double c) {
  Jet r(a.anchor(), a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) r.coeff(i) = a.coeff(i) * c;
  return r;
}
inline Jet operator*(double c, const Jet& a) { return a * c; }

inline Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
inline Jet operator/(double c, const Jet& a) {
  return Jet::constant(c, a.anchor(), a.order()) / a;
}

// exp(a): e_i = (1/i) sum_{j=1..i} j a_j e_{i-j}.
inline Jet exp(const Jet& a) {
  Jet r(a.anchor(), a.order());
  r.coeff(0) = std::exp(a.coeff(0));
  for (std::size_t i = 1; i <= a.order(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= i; ++j)
      acc += static_cast<double>(j) * a.coeff(j) * r.coeff(i - j);
    r.coeff(i) = acc / static_cast<double>(i);
  }
  return r;
}

// ln(a): from a l' = a', requires a positive constant term.
inline Jet ln(const Jet& a) {
  if (!(a.coeff(0) > 0.0))
    throw std::domain_error("jet ln requires a positive constant term");
  Jet r(a.anchor(), a.order());
  r.coeff(0) = std::log(a.coeff(0));
  for (std::size_t i = 1; i <= a.order(); ++i) {
    double acc = static_cast<double>(i) * a.coeff(i);
    for (std::size_t j = 1; j < i; ++j)
      acc -= static_cast<double>(j) * r.coeff(j) * a.coeff(i - j);
    r.coeff(i) = acc / (static_cast<double>(i) * a.coeff(0));
  }
  return r;
}

namespace detail {
inline Jet pow_nonneg_int(const Jet& a, long long p) {
  Jet result = Jet::constant(1.0, a.anchor(), a.order());
  Jet base = a;
  while (p > 0) {
    if (p & 1) result = result * base;
    p >>= 1;
    if (p) base = base * base;
  }
  return result;
}
}  // namespace detail

// a^p. Integer exponents run through repeated multiplication (exact for
// polynomial inputs, handles any sign of the base); real exponents go
// through exp(p ln a) and require a positive constant term.
inline Jet pow(const Jet& a, double p) {
  double ip = 0.0;
  if (std::modf(p, &ip) == 0.0 && std::abs(ip) <= 1024.0) {
    auto n = static_cast<long long>(ip);
    if (n >= 0) return detail::pow_nonneg_int(a, n);
    return 1.0 / detail::pow_nonneg_int(a, -n);
  }
  if (!(a.coeff(0) > 0.0))
    throw std::domain_error("jet pow with real exponent requires a positive constant term");
  return exp(ln(a) * p);
}

}  // namespace kauction
