#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace pilotwave {

// Dense univariate polynomial, coefficient index = power of x.
// T is double, std::complex<double>, or an exact rational type.
template <class T>
class Polynomial {
 public:
  Polynomial() : c_(1, T(0)) {}
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.assign(1, T(0));
  }
  static Polynomial constant(T v) { return Polynomial(std::vector<T>{v}); }

  const std::vector<T>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  T coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : T(0);
  }

  // Horner evaluation.
  template <class X>
  auto operator()(X x) const {
    using R = decltype(T(0) * x + T(0));
    R acc = R(c_.back());
    for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i)
      acc = acc * x + R(c_[i]);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<int>(i));
    return Polynomial(std::move(d));
  }

  // Multiply by x.
  Polynomial shifted() const {
    std::vector<T> s(c_.size() + 1, T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) s[i + 1] = c_[i];
    return Polynomial(std::move(s));
  }

  Polynomial operator*(const Polynomial& o) const {
    std::vector<T> r(c_.size() + o.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
  }

  Polynomial operator+(const Polynomial& o) const {
    std::vector<T> r(std::max(c_.size(), o.c_.size()), T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Polynomial(std::move(r));
  }

  Polynomial operator-(const Polynomial& o) const {
    std::vector<T> r(std::max(c_.size(), o.c_.size()), T(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return Polynomial(std::move(r));
  }

  Polynomial operator*(T s) const {
    std::vector<T> r = c_;
    for (auto& x : r) x *= s;
    return Polynomial(std::move(r));
  }

  // Drop trailing zero coefficients (keeps at least the constant term).
  Polynomial trimmed() const {
    std::vector<T> r = c_;
    while (r.size() > 1 && r.back() == T(0)) r.pop_back();
    return Polynomial(std::move(r));
  }

 private:
  std::vector<T> c_;
};

using PolynomialCoeffs = Polynomial<double>;

}  // namespace pilotwave
