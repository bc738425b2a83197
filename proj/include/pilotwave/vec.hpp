#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>

namespace pilotwave {

// Phase space of a single 3-D particle is the largest state we integrate.
inline constexpr int kMaxStateDim = 6;

// Fixed-capacity vector of doubles. No heap traffic in integrator loops.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int n, double fill = 0.0) : n_(n) {
    assert(n >= 0 && n <= kMaxStateDim);
    v_.fill(0.0);
    for (int i = 0; i < n; ++i) v_[i] = fill;
  }
  Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
    assert(n_ <= kMaxStateDim);
    v_.fill(0.0);
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }

  int size() const { return n_; }
  double operator[](int i) const { return v_[i]; }
  double& operator[](int i) { return v_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n_; ++i) v_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  double inf_norm() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(v_[i]));
    return m;
  }

  bool all_finite() const {
    for (int i = 0; i < n_; ++i)
      if (!std::isfinite(v_[i])) return false;
    return true;
  }

 private:
  std::array<double, kMaxStateDim> v_{};
  int n_ = 0;
};

// Complex companion for wave-function gradients (spatial dims only).
class CVec {
 public:
  CVec() = default;
  explicit CVec(int n) : n_(n) { assert(n >= 0 && n <= 3); }

  int size() const { return n_; }
  std::complex<double> operator[](int i) const { return v_[i]; }
  std::complex<double>& operator[](int i) { return v_[i]; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += std::norm(v_[i]);
    return s;
  }

 private:
  std::array<std::complex<double>, 3> v_{};
  int n_ = 0;
};

}  // namespace pilotwave
