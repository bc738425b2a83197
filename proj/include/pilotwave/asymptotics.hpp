#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <vector>

#include "pilotwave/polynomial.hpp"
#include "pilotwave/quantum_state.hpp"

namespace pilotwave {

using Rational = boost::multiprecision::cpp_rational;

// Coefficients alpha_n(t) of |psi(x,t)|^2 = e^{-x^2} P(x,t), P of degree 2M.
struct DensityPolynomial {
  std::vector<double> alphas;  // index = power of x
  int degree = 0;              // 2M
  double t = 0.0;

  double p_at(double x) const;
};

struct AsymptoticBound {
  double b = 0.0;            // (|c_{M-1}|/|c_M|) sqrt(M/2)
  double phase_offset = 0.0; // theta_M - theta_{M-1}; meaningless when degenerate
  bool degenerate = false;   // |c_{M-1}| = 0: decay is faster than 1/x^2
};

// Exact expansion of |psi|^2 e^{+x^2} at time t.
DensityPolynomial density_polynomial(const OscillatorSuperposition& state, double t);

// Acceleration from P and its derivatives alone:
//   a = [P^2 P''' + (P')^3 - 2 P P' P'' - 2x P^2 P'' - 2 P^2 P' + 2x P (P')^2] / (4 P^3).
// The numerator is assembled in exact rational arithmetic so that its
// x^{3N-1} coefficient cancels identically; without that the large-x
// evaluation would lose everything to rounding.
class AccelerationPoly {
 public:
  explicit AccelerationPoly(const DensityPolynomial& poly);

  // Throws std::domain_error when P(x) <= 0.
  double operator()(double x) const;

  const Polynomial<double>& numerator() const { return numerator_; }

  // The six-term numerator over exact rationals (doubles are rationals, so
  // the assembly is exact for the given alpha values).
  static Polynomial<Rational> exact_numerator(const DensityPolynomial& poly);

 private:
  Polynomial<double> p_;
  Polynomial<double> numerator_;
};

// One-shot convenience form.
double rational_acceleration(const DensityPolynomial& poly, double x);

AsymptoticBound asymptotic_bound(const OscillatorSuperposition& state);

// Grid verification of a lower bound a > -b_check/x^2 plus the large-x
// asymptotic form a ~ -(b/x^2) cos(t - phase_offset).
struct BoundCheckConfig {
  double x_min = 3.0;
  double x_max = 10.0;
  int nx = 400;
  bool log_x = false;
  double t_min = 0.0;
  double t_max = 6.283185307179586;
  int nt = 200;
  double b_check = 2.0;
  double asym_rel_tol = 0.01;  // residual threshold, relative to b
};

struct BoundReport {
  double grid_min_shifted = 0.0;  // min of a + b_check/x^2
  double grid_min_scaled = 0.0;   // min of a x^2 + b_check
  double argmin_x = 0.0;
  double argmin_t = 0.0;
  int nodes_excluded = 0;
  double asym_residual = 0.0;       // max |a x^2 + b cos(t - offset)| at x_max
  double asym_residual_inner = 0.0; // same at x_max/10
  bool grid_pass = false;
  bool asym_pass = false;
};

// Optional sink receives (x, t, a, a + b_check/x^2) rows for plotting.
using GridSink = std::function<void(double, double, double, double)>;

BoundReport verify_bound(const OscillatorSuperposition& state,
                         const BoundCheckConfig& cfg, const GridSink& sink = {});

}  // namespace pilotwave
