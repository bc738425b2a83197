#pragma once

#include <complex>

#include "pilotwave/polynomial.hpp"

namespace pilotwave {

// Coefficient growth past this degree starts to cost accuracy in doubles;
// requests above it are rejected rather than silently degraded.
inline constexpr int kPolynomialDegreeCap = 12;

// Physicists' Hermite polynomial H_m, exact integer coefficients.
// H_{m+1} = 2x H_m - 2m H_{m-1}; leading coefficient 2^m.
PolynomialCoeffs hermite(int m);

// Generalized Laguerre polynomial L_k^{(alpha)}.
PolynomialCoeffs associated_laguerre(int k, double alpha);

// Legendre polynomial P_l and its m-th derivative d^m P_l / du^m
// (the polynomial factor of the associated Legendre function).
PolynomialCoeffs legendre(int l);
PolynomialCoeffs legendre_derivative(int l, int m);

// Orthonormal complex spherical harmonic with the Condon-Shortley phase.
std::complex<double> spherical_harmonic(int l, int m, double theta, double phi);

// Prefactor kappa such that Y_lm = kappa * (sin theta)^{|m|} *
// (d^{|m|} P_l/du^{|m|})(cos theta) * e^{i m phi}. Exposed for wave-function
// assembly in Cartesian form.
double spherical_harmonic_prefactor(int l, int m);

double factorial(int n);

}  // namespace pilotwave
