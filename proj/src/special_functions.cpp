#include "pilotwave/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pilotwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_cap(int deg, const char* what) {
  if (deg < 0) throw std::domain_error(std::string(what) + ": negative order");
  if (deg > kPolynomialDegreeCap)
    throw std::domain_error(std::string(what) + ": order " + std::to_string(deg) +
                            " exceeds the degree cap " +
                            std::to_string(kPolynomialDegreeCap));
}

}  // namespace

double factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

PolynomialCoeffs hermite(int m) {
  check_cap(m, "hermite");
  PolynomialCoeffs h0 = PolynomialCoeffs::constant(1.0);
  if (m == 0) return h0;
  PolynomialCoeffs h1({0.0, 2.0});
  for (int k = 1; k < m; ++k) {
    PolynomialCoeffs next = h1.shifted() * 2.0 - h0 * (2.0 * k);
    h0 = h1;
    h1 = next;
  }
  return h1;
}

PolynomialCoeffs associated_laguerre(int k, double alpha) {
  check_cap(k, "associated_laguerre");
  PolynomialCoeffs l0 = PolynomialCoeffs::constant(1.0);
  if (k == 0) return l0;
  PolynomialCoeffs l1({1.0 + alpha, -1.0});
  for (int j = 1; j < k; ++j) {
    // (j+1) L_{j+1} = (2j+1+alpha - x) L_j - (j+alpha) L_{j-1}
    PolynomialCoeffs next =
        (l1 * (2.0 * j + 1.0 + alpha) - l1.shifted() - l0 * (j + alpha)) *
        (1.0 / (j + 1.0));
    l0 = l1;
    l1 = next;
  }
  return l1;
}

PolynomialCoeffs legendre(int l) {
  check_cap(l, "legendre");
  PolynomialCoeffs p0 = PolynomialCoeffs::constant(1.0);
  if (l == 0) return p0;
  PolynomialCoeffs p1({0.0, 1.0});
  for (int k = 1; k < l; ++k) {
    // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
    PolynomialCoeffs next =
        (p1.shifted() * (2.0 * k + 1.0) - p0 * static_cast<double>(k)) *
        (1.0 / (k + 1.0));
    p0 = p1;
    p1 = next;
  }
  return p1;
}

PolynomialCoeffs legendre_derivative(int l, int m) {
  if (m < 0 || m > l)
    throw std::domain_error("legendre_derivative: require 0 <= m <= l");
  PolynomialCoeffs p = legendre(l);
  for (int i = 0; i < m; ++i) p = p.derivative();
  return p;
}

double spherical_harmonic_prefactor(int l, int m) {
  const int k = std::abs(m);
  if (k > l) throw std::domain_error("spherical_harmonic: |m| > l");
  check_cap(l, "spherical_harmonic");
  double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * factorial(l - k) /
                          factorial(l + k));
  // Condon-Shortley: (-1)^m for m >= 0; absorbed for m < 0 by
  // Y_{l,-m} = (-1)^m conj(Y_{l,m}).
  if (m >= 0 && (m % 2 != 0)) norm = -norm;
  return norm;
}

std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  const int k = std::abs(m);
  const double kappa = spherical_harmonic_prefactor(l, m);
  const double u = std::cos(theta);
  const double s = std::sin(theta);
  const double g = legendre_derivative(l, k)(u);
  double sk = 1.0;
  for (int i = 0; i < k; ++i) sk *= s;
  return kappa * sk * g * std::exp(std::complex<double>(0.0, m * phi));
}

}  // namespace pilotwave
