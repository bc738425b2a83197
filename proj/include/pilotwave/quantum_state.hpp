#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pilotwave/polynomial.hpp"
#include "pilotwave/vec.hpp"

namespace pilotwave {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Potentials

enum class PotentialKind { oscillator_1d, coulomb_3d, field_mode_2d };

// V = x^2/2 (1-D), V = -1/r (3-D), or V = (1/2) a k^2 (q1^2 + q2^2) (2-D).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::oscillator_1d;
  double a = 1.0;  // field-mode scale factor
  double k = 1.0;  // field-mode wavenumber

  static PotentialSpec oscillator1d();
  static PotentialSpec coulomb3d();
  static PotentialSpec field_mode2d(double a, double k);

  int dimension() const;
  double value(const Vec& q) const;
  Vec gradient(const Vec& q) const;
};

// ---------------------------------------------------------------------------
// Errors

// Raised where the wave amplitude has (numerically) vanished: velocity and Q
// are singular at nodes and we refuse to evaluate them there.
class NodeProximityError : public std::runtime_error {
 public:
  NodeProximityError(const Vec& q, double t, double cancellation);
  Vec position;
  double time;
  double cancellation;
};

// ---------------------------------------------------------------------------
// Wave-function evaluation

// All local values at (q, t), in envelope-stripped form: psi = e^{log_env} u.
// Velocity, Q and the Bohm force are ratios in which the envelope cancels,
// so they stay finite-precision far out in Gaussian tails where the raw
// density underflows.
struct PsiEval {
  Complex u;                // stripped amplitude
  CVec du;                  // stripped gradient: grad psi = e^{log_env} du
  Complex lap_u;            // stripped Laplacian
  Complex dt_u;             // stripped time derivative
  double log_env = 0.0;     // ln of the positive envelope
  double term_scale = 0.0;  // sum of |individual term values| of u

  Complex psi() const { return std::exp(log_env) * u; }
  double density() const {
    const double e = std::exp(log_env);
    return e * e * std::norm(u);
  }
  // |u|^2 relative to the no-cancellation scale; ~0 means a node.
  double cancellation() const {
    const double s2 = term_scale * term_scale;
    if (!(s2 > 0.0)) return 0.0;
    return std::norm(u) / s2;
  }
  // grad S = Im(conj(psi) grad psi)/|psi|^2, envelope-free.
  Vec grad_S() const;
  double dS_dt() const { return std::imag(dt_u / u); }
  double dlog_density_dt() const { return 2.0 * std::real(dt_u / u); }
};

// Everything the dynamics needs from a wave function. Implementations are
// immutable after construction and safe for concurrent evaluation.
class WaveFunction {
 public:
  virtual ~WaveFunction() = default;
  virtual int dimension() const = 0;
  virtual PsiEval eval(const Vec& q, double t) const = 0;
  // Hamiltonian the state's eigenbasis belongs to.
  virtual PotentialSpec natural_potential() const = 0;
  // Half-width of a box certain to contain all but ~1e-9 of the density.
  virtual double bulk_halfwidth() const = 0;

  // Closed-form -dQ/dx where available (1-D oscillator superpositions).
  virtual std::optional<double> analytic_quantum_force(const Vec& q, double t,
                                                       double mass) const {
    (void)q;
    (void)t;
    (void)mass;
    return std::nullopt;
  }
};

// Fraction of the local term scale below which a point counts as a node.
inline constexpr double kDefaultNodeEpsilon = 1e-12;

// ---------------------------------------------------------------------------
// Concrete states

// Finite superposition sum_m c_m e^{-i(m+1/2)t} phi_m of 1-D oscillator
// eigenstates, units hbar = m = omega0 = 1.
class OscillatorSuperposition : public WaveFunction {
 public:
  struct Term {
    int level = 0;
    double modulus = 0.0;
    double phase = 0.0;
  };

  // Requires distinct levels, nonzero top coefficient, sum |c|^2 = 1 to 1e-12.
  explicit OscillatorSuperposition(std::vector<Term> terms);
  // Rescales moduli to unit norm first.
  static OscillatorSuperposition normalized(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  int max_level() const { return max_level_; }

  int dimension() const override { return 1; }
  PsiEval eval(const Vec& q, double t) const override;
  PotentialSpec natural_potential() const override;
  double bulk_halfwidth() const override;
  std::optional<double> analytic_quantum_force(const Vec& q, double t,
                                               double mass) const override;

  // Stripped psi^(k) = e^{-x^2/2} B_k(x), k = 0..3. Exposed for the density
  // polynomial cross-checks.
  void stripped_derivatives(double x, double t, Complex out[4]) const;

  // Time-dependent coefficients of the polynomial factor
  // G(x,t) = sum_m c_m(t) N_m H_m(x), so that psi = e^{-x^2/2} G.
  std::vector<Complex> polynomial_coefficients(double t) const;

 private:
  std::vector<Term> terms_;  // sorted by level
  std::vector<std::vector<double>> weighted_hermite_;  // N_m * H_m coefficients
  int max_level_ = 0;
};

// Tensor-product basis superposition for a 2-D oscillator with parameters
// (mass, omega): eigenfunctions phi_{m1}(xi_1) phi_{m2}(xi_2) with
// xi = sqrt(mass*omega) q and energies (m1+m2+1) omega.
class Oscillator2D : public WaveFunction {
 public:
  struct Term {
    int level1 = 0;
    int level2 = 0;
    double modulus = 0.0;
    double phase = 0.0;
  };

  Oscillator2D(double mass, double omega, std::vector<Term> terms);
  static Oscillator2D normalized(double mass, double omega, std::vector<Term> terms);

  double mass() const { return mass_; }
  double omega() const { return omega_; }
  const std::vector<Term>& terms() const { return terms_; }

  int dimension() const override { return 2; }
  PsiEval eval(const Vec& q, double t) const override;
  PotentialSpec natural_potential() const override;
  double bulk_halfwidth() const override;

 private:
  double mass_ = 1.0;
  double omega_ = 1.0;
  double scale_ = 1.0;  // sqrt(mass * omega)
  std::vector<Term> terms_;
  std::vector<std::vector<double>> weighted_hermite_;  // per level
  int max_level_ = 0;
};

// Finite superposition of hydrogen eigenstates phi_{nlm}, units
// hbar = mass = a0 = 1, energies E_n = -1/(2 n^2).
class HydrogenSuperposition : public WaveFunction {
 public:
  struct Term {
    int n = 1;
    int l = 0;
    int m = 0;
    Complex coeff;
  };

  explicit HydrogenSuperposition(std::vector<Term> terms);
  static HydrogenSuperposition normalized(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

  int dimension() const override { return 3; }
  PsiEval eval(const Vec& q, double t) const override;
  PotentialSpec natural_potential() const override;
  double bulk_halfwidth() const override;

 private:
  struct TermData {
    Term t;
    double energy;
    double radial_norm;       // N_nl
    PolynomialCoeffs laguerre;  // L^{2l+1}_{n-l-1}
    PolynomialCoeffs laguerre_d;
    double kappa;             // spherical-harmonic prefactor
    PolynomialCoeffs leg;     // d^{|m|} P_l / du^{|m|}
    PolynomialCoeffs leg_d;
    int abs_m;
    double m_sign;            // +1 for m >= 0, -1 otherwise
  };
  std::vector<Term> terms_;
  std::vector<TermData> data_;
};

// ---------------------------------------------------------------------------
// Derived local fields (the spec's WaveSample)

struct WaveSample {
  Vec position;
  double time = 0.0;
  Complex psi;
  CVec grad_psi;
  double density = 0.0;
  Vec velocity;             // de Broglie velocity, NaN-filled near nodes
  double quantum_potential = 0.0;
  Vec bohm_force;           // -grad(V+Q) for the state's natural potential
  bool near_node = false;
};

struct QForceOptions {
  double fd_step = 1e-3;       // base stencil step for d > 1
  double node_epsilon = kDefaultNodeEpsilon;
};

// All local fields at (q, t). Near a node the singular fields are NaN and
// near_node is set instead of throwing, so grids can flag-and-continue.
WaveSample evaluate(const WaveFunction& state, const Vec& q, double t,
                    double mass = 1.0, const QForceOptions& opts = {});

// grad S(q, t). Throws NodeProximityError below the cancellation threshold.
Vec de_broglie_momentum(const WaveFunction& state, const Vec& q, double t,
                        double node_epsilon = kDefaultNodeEpsilon);

double quantum_potential(const WaveFunction& state, const Vec& q, double t,
                         double mass = 1.0,
                         double node_epsilon = kDefaultNodeEpsilon);

// -grad Q: closed form in 1-D, Richardson-extrapolated five-point central
// differences of Q per axis otherwise.
Vec quantum_force(const WaveFunction& state, const Vec& q, double t,
                  double mass = 1.0, const QForceOptions& opts = {});

// (-grad V + quantum_force)/mass.
Vec acceleration(const WaveFunction& state, const PotentialSpec& potential,
                 const Vec& q, double t, double mass = 1.0,
                 const QForceOptions& opts = {});

}  // namespace pilotwave
