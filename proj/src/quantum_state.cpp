#include "pilotwave/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "pilotwave/special_functions.hpp"

namespace pilotwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNormTol = 1e-12;

double horner(const std::vector<double>& c, double x) {
  double acc = c.back();
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

Complex horner(const std::vector<Complex>& c, double x) {
  Complex acc = c.back();
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) acc = acc * x + c[i];
  return acc;
}

Complex ipow(Complex w, int k) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= w;
  return r;
}

// N_m = pi^{-1/4} / sqrt(2^m m!)
double oscillator_norm(int m) {
  return 1.0 / (std::pow(kPi, 0.25) * std::sqrt(std::ldexp(1.0, m) * factorial(m)));
}

std::vector<double> weighted_hermite(int m) {
  const double nm = oscillator_norm(m);
  std::vector<double> c = hermite(m).coeffs();
  for (double& x : c) x *= nm;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// PotentialSpec

PotentialSpec PotentialSpec::oscillator1d() {
  return PotentialSpec{PotentialKind::oscillator_1d, 1.0, 1.0};
}

PotentialSpec PotentialSpec::coulomb3d() {
  return PotentialSpec{PotentialKind::coulomb_3d, 1.0, 1.0};
}

PotentialSpec PotentialSpec::field_mode2d(double a, double k) {
  if (!(a > 0.0) || !(k > 0.0) || !std::isfinite(a) || !std::isfinite(k))
    throw std::invalid_argument("field_mode2d potential requires a > 0 and k > 0");
  return PotentialSpec{PotentialKind::field_mode_2d, a, k};
}

int PotentialSpec::dimension() const {
  switch (kind) {
    case PotentialKind::oscillator_1d: return 1;
    case PotentialKind::coulomb_3d: return 3;
    case PotentialKind::field_mode_2d: return 2;
  }
  return 0;
}

double PotentialSpec::value(const Vec& q) const {
  switch (kind) {
    case PotentialKind::oscillator_1d:
      return 0.5 * q[0] * q[0];
    case PotentialKind::coulomb_3d:
      return -1.0 / q.norm();
    case PotentialKind::field_mode_2d:
      return 0.5 * a * k * k * (q[0] * q[0] + q[1] * q[1]);
  }
  return 0.0;
}

Vec PotentialSpec::gradient(const Vec& q) const {
  switch (kind) {
    case PotentialKind::oscillator_1d:
      return Vec{q[0]};
    case PotentialKind::coulomb_3d: {
      const double r = q.norm();
      const double r3 = r * r * r;
      return Vec{q[0] / r3, q[1] / r3, q[2] / r3};
    }
    case PotentialKind::field_mode_2d: {
      const double s = a * k * k;
      return Vec{s * q[0], s * q[1]};
    }
  }
  return Vec{};
}

// ---------------------------------------------------------------------------
// Errors

NodeProximityError::NodeProximityError(const Vec& q, double t, double c)
    : std::runtime_error("wave amplitude vanishes at the requested point"),
      position(q),
      time(t),
      cancellation(c) {}

// ---------------------------------------------------------------------------
// PsiEval

Vec PsiEval::grad_S() const {
  Vec g(du.size());
  const double den = std::norm(u);
  for (int i = 0; i < du.size(); ++i) g[i] = std::imag(std::conj(u) * du[i]) / den;
  return g;
}

// ---------------------------------------------------------------------------
// OscillatorSuperposition

OscillatorSuperposition::OscillatorSuperposition(std::vector<Term> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("oscillator state: no terms");
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.level < b.level; });
  double norm2 = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    if (t.level < 0) throw std::invalid_argument("oscillator state: negative level");
    if (t.level > kPolynomialDegreeCap)
      throw std::invalid_argument("oscillator state: level exceeds degree cap");
    if (i > 0 && terms_[i - 1].level == t.level)
      throw std::invalid_argument("oscillator state: duplicate level");
    if (!(t.modulus >= 0.0) || !std::isfinite(t.modulus) || !std::isfinite(t.phase))
      throw std::invalid_argument("oscillator state: bad coefficient");
    norm2 += t.modulus * t.modulus;
  }
  if (std::abs(norm2 - 1.0) > kNormTol)
    throw std::invalid_argument("oscillator state: coefficients not normalized");
  if (!(terms_.back().modulus > 0.0))
    throw std::invalid_argument("oscillator state: top coefficient must be nonzero");
  max_level_ = terms_.back().level;
  weighted_hermite_.reserve(terms_.size());
  for (const Term& t : terms_) weighted_hermite_.push_back(weighted_hermite(t.level));
}

OscillatorSuperposition OscillatorSuperposition::normalized(std::vector<Term> terms) {
  double norm2 = 0.0;
  for (const Term& t : terms) norm2 += t.modulus * t.modulus;
  if (!(norm2 > 0.0))
    throw std::invalid_argument("oscillator state: cannot normalize zero vector");
  const double s = 1.0 / std::sqrt(norm2);
  for (Term& t : terms) t.modulus *= s;
  return OscillatorSuperposition(std::move(terms));
}

std::vector<Complex> OscillatorSuperposition::polynomial_coefficients(double t) const {
  std::vector<Complex> g(max_level_ + 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& tm = terms_[i];
    const double em = tm.level + 0.5;
    const Complex f = tm.modulus * std::exp(Complex(0.0, tm.phase - em * t));
    const std::vector<double>& w = weighted_hermite_[i];
    for (std::size_t j = 0; j < w.size(); ++j) g[j] += f * w[j];
  }
  return g;
}

void OscillatorSuperposition::stripped_derivatives(double x, double t,
                                                   Complex out[4]) const {
  const std::vector<Complex> g = polynomial_coefficients(t);
  // Values of G and its first three derivatives at x.
  Complex gv[4] = {horner(g, x), 0.0, 0.0, 0.0};
  std::vector<Complex> d = g;
  for (int k = 1; k <= 3; ++k) {
    if (d.size() > 1) {
      for (std::size_t j = 1; j < d.size(); ++j) d[j - 1] = d[j] * double(j);
      d.pop_back();
    } else {
      d[0] = 0.0;
    }
    gv[k] = horner(d, x);
  }
  const double x2 = x * x;
  out[0] = gv[0];
  out[1] = gv[1] - x * gv[0];
  out[2] = gv[2] - 2.0 * x * gv[1] + (x2 - 1.0) * gv[0];
  out[3] = gv[3] - 3.0 * x * gv[2] + 3.0 * (x2 - 1.0) * gv[1] + (3.0 * x - x2 * x) * gv[0];
}

PsiEval OscillatorSuperposition::eval(const Vec& q, double t) const {
  const double x = q[0];
  PsiEval e;
  Complex b[4];
  stripped_derivatives(x, t, b);
  e.u = b[0];
  e.du = CVec(1);
  e.du[0] = b[1];
  e.lap_u = b[2];
  e.log_env = -0.5 * x * x;
  Complex dt(0.0, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& tm = terms_[i];
    const double em = tm.level + 0.5;
    const Complex f = tm.modulus * std::exp(Complex(0.0, tm.phase - em * t));
    const double val = horner(weighted_hermite_[i], x);
    dt += Complex(0.0, -em) * f * val;
    scale += tm.modulus * std::abs(val);
  }
  e.dt_u = dt;
  e.term_scale = scale;
  return e;
}

PotentialSpec OscillatorSuperposition::natural_potential() const {
  return PotentialSpec::oscillator1d();
}

double OscillatorSuperposition::bulk_halfwidth() const {
  return std::sqrt(2.0 * max_level_ + 1.0) + 8.0;
}

std::optional<double> OscillatorSuperposition::analytic_quantum_force(
    const Vec& q, double t, double mass) const {
  Complex b[4];
  stripped_derivatives(q[0], t, b);
  const double r0 = std::norm(b[0]);
  const double r1 = 2.0 * std::real(std::conj(b[0]) * b[1]);
  const double r2 = 2.0 * std::norm(b[1]) + 2.0 * std::real(std::conj(b[0]) * b[2]);
  const double r3 = 6.0 * std::real(std::conj(b[1]) * b[2]) +
                    2.0 * std::real(std::conj(b[0]) * b[3]);
  // -dQ/dx with Q = -rho''/(4 rho) + (rho')^2/(8 rho^2), envelope cancelled.
  const double f = r3 / (4.0 * r0) - r1 * r2 / (2.0 * r0 * r0) +
                   r1 * r1 * r1 / (4.0 * r0 * r0 * r0);
  return f / mass;
}

// ---------------------------------------------------------------------------
// Oscillator2D

Oscillator2D::Oscillator2D(double mass, double omega, std::vector<Term> terms)
    : mass_(mass), omega_(omega), terms_(std::move(terms)) {
  if (!(mass_ > 0.0) || !(omega_ > 0.0))
    throw std::invalid_argument("oscillator2d: mass and omega must be positive");
  if (terms_.empty()) throw std::invalid_argument("oscillator2d: no terms");
  scale_ = std::sqrt(mass_ * omega_);
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return std::pair(a.level1, a.level2) < std::pair(b.level1, b.level2);
  });
  double norm2 = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    if (t.level1 < 0 || t.level2 < 0)
      throw std::invalid_argument("oscillator2d: negative level");
    if (t.level1 > kPolynomialDegreeCap || t.level2 > kPolynomialDegreeCap)
      throw std::invalid_argument("oscillator2d: level exceeds degree cap");
    if (i > 0 && terms_[i - 1].level1 == t.level1 && terms_[i - 1].level2 == t.level2)
      throw std::invalid_argument("oscillator2d: duplicate level pair");
    if (!(t.modulus >= 0.0) || !std::isfinite(t.modulus) || !std::isfinite(t.phase))
      throw std::invalid_argument("oscillator2d: bad coefficient");
    norm2 += t.modulus * t.modulus;
    max_level_ = std::max({max_level_, t.level1, t.level2});
  }
  if (std::abs(norm2 - 1.0) > kNormTol)
    throw std::invalid_argument("oscillator2d: coefficients not normalized");
  weighted_hermite_.resize(max_level_ + 1);
  for (int m = 0; m <= max_level_; ++m) weighted_hermite_[m] = weighted_hermite(m);
}

Oscillator2D Oscillator2D::normalized(double mass, double omega,
                                      std::vector<Term> terms) {
  double norm2 = 0.0;
  for (const Term& t : terms) norm2 += t.modulus * t.modulus;
  if (!(norm2 > 0.0))
    throw std::invalid_argument("oscillator2d: cannot normalize zero vector");
  const double s = 1.0 / std::sqrt(norm2);
  for (Term& t : terms) t.modulus *= s;
  return Oscillator2D(mass, omega, std::move(terms));
}

PsiEval Oscillator2D::eval(const Vec& q, double t) const {
  const double xi1 = scale_ * q[0];
  const double xi2 = scale_ * q[1];
  const double pref = scale_;  // (mass*omega)^{1/4} per axis
  const double pot = 0.5 * mass_ * omega_ * omega_ * (q[0] * q[0] + q[1] * q[1]);

  // Per-level values and derivatives on each axis.
  std::vector<double> v1(max_level_ + 1), v2(max_level_ + 1);
  std::vector<double> d1(max_level_ + 1), d2(max_level_ + 1);
  for (int m = 0; m <= max_level_; ++m) {
    const std::vector<double>& w = weighted_hermite_[m];
    v1[m] = horner(w, xi1);
    v2[m] = horner(w, xi2);
    // H_m' = 2m H_{m-1}  =>  w_m' = sqrt(2m) w_{m-1}
    const double lad = (m > 0) ? std::sqrt(2.0 * m) : 0.0;
    d1[m] = (m > 0) ? lad * v1[m - 1] : 0.0;
    d2[m] = (m > 0) ? lad * v2[m - 1] : 0.0;
  }

  PsiEval e;
  e.du = CVec(2);
  Complex u(0.0, 0.0), dxu(0.0, 0.0), dyu(0.0, 0.0), lap(0.0, 0.0), dt(0.0, 0.0);
  double scale_sum = 0.0;
  for (const Term& tm : terms_) {
    const double energy = (tm.level1 + tm.level2 + 1.0) * omega_;
    const Complex f =
        tm.modulus * std::exp(Complex(0.0, tm.phase - energy * t)) * pref;
    const double p12 = v1[tm.level1] * v2[tm.level2];
    const Complex term = f * p12;
    u += term;
    dxu += f * d1[tm.level1] * v2[tm.level2];
    dyu += f * v1[tm.level1] * d2[tm.level2];
    lap += 2.0 * mass_ * (pot - energy) * term;
    dt += Complex(0.0, -energy) * term;
    scale_sum += tm.modulus * pref * std::abs(p12);
  }
  e.u = u;
  e.du[0] = scale_ * dxu - scale_ * xi1 * u;
  e.du[1] = scale_ * dyu - scale_ * xi2 * u;
  e.lap_u = lap;
  e.dt_u = dt;
  e.log_env = -0.5 * (xi1 * xi1 + xi2 * xi2);
  e.term_scale = scale_sum;
  return e;
}

PotentialSpec Oscillator2D::natural_potential() const {
  const double a = std::cbrt(mass_);
  return PotentialSpec::field_mode2d(a, omega_ * a);
}

double Oscillator2D::bulk_halfwidth() const {
  return (std::sqrt(2.0 * (2.0 * max_level_ + 1.0)) + 8.0) / scale_;
}

// ---------------------------------------------------------------------------
// HydrogenSuperposition

HydrogenSuperposition::HydrogenSuperposition(std::vector<Term> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("hydrogen state: no terms");
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return std::tuple(a.n, a.l, a.m) < std::tuple(b.n, b.l, b.m);
  });
  double norm2 = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    if (t.n < 1 || t.l < 0 || t.l >= t.n || std::abs(t.m) > t.l)
      throw std::invalid_argument("hydrogen state: invalid quantum numbers");
    if (i > 0 && std::tuple(terms_[i - 1].n, terms_[i - 1].l, terms_[i - 1].m) ==
                     std::tuple(t.n, t.l, t.m))
      throw std::invalid_argument("hydrogen state: duplicate eigenstate");
    norm2 += std::norm(t.coeff);
  }
  if (std::abs(norm2 - 1.0) > kNormTol)
    throw std::invalid_argument("hydrogen state: coefficients not normalized");

  data_.reserve(terms_.size());
  for (const Term& t : terms_) {
    TermData d;
    d.t = t;
    d.energy = -1.0 / (2.0 * t.n * t.n);
    d.radial_norm = std::sqrt(std::pow(2.0 / t.n, 3) * factorial(t.n - t.l - 1) /
                              (2.0 * t.n * factorial(t.n + t.l)));
    d.laguerre = associated_laguerre(t.n - t.l - 1, 2.0 * t.l + 1.0);
    d.laguerre_d = d.laguerre.derivative();
    d.kappa = spherical_harmonic_prefactor(t.l, t.m);
    d.abs_m = std::abs(t.m);
    d.leg = legendre_derivative(t.l, d.abs_m);
    d.leg_d = d.leg.derivative();
    d.m_sign = (t.m >= 0) ? 1.0 : -1.0;
    data_.push_back(std::move(d));
  }
}

HydrogenSuperposition HydrogenSuperposition::normalized(std::vector<Term> terms) {
  double norm2 = 0.0;
  for (const Term& t : terms) norm2 += std::norm(t.coeff);
  if (!(norm2 > 0.0))
    throw std::invalid_argument("hydrogen state: cannot normalize zero vector");
  const double s = 1.0 / std::sqrt(norm2);
  for (Term& t : terms) t.coeff *= s;
  return HydrogenSuperposition(std::move(terms));
}

PsiEval HydrogenSuperposition::eval(const Vec& q, double t) const {
  const double x = q[0], y = q[1], z = q[2];
  const double r = q.norm();
  PsiEval e;
  e.du = CVec(3);
  if (!(r > 1e-12)) return e;  // Coulomb center: flagged as unevaluable

  const double ucos = z / r;
  const Vec grad_u{-ucos * x / (r * r), -ucos * y / (r * r), 1.0 / r - ucos * z / (r * r)};
  Complex u(0.0, 0.0), lap(0.0, 0.0), dt(0.0, 0.0);
  Complex g0(0.0, 0.0), g1(0.0, 0.0), g2(0.0, 0.0);
  double scale_sum = 0.0;

  for (const TermData& d : data_) {
    const int n = d.t.n, l = d.t.l, k = d.abs_m;
    const double uu = 2.0 * r / n;
    const double lval = d.laguerre(uu);
    const double ldval = (d.laguerre.degree() > 0) ? d.laguerre_d(uu) : 0.0;
    double uul = 1.0, uulm1 = 0.0;  // uu^l and uu^{l-1}
    if (l > 0) {
      uulm1 = 1.0;
      for (int i = 0; i < l - 1; ++i) uulm1 *= uu;
      uul = uulm1 * uu;
    }
    const double expf = std::exp(-r / n);
    const double radial = d.radial_norm * expf * uul * lval;
    const double radial_d =
        d.radial_norm * expf *
        (-uul * lval / n + (2.0 / n) * (l * uulm1 * lval + uul * ldval));

    // T = R / r^k and its radial derivative.
    double rk = 1.0;
    for (int i = 0; i < k; ++i) rk *= r;
    const double tt = radial / rk;
    const double tt_d = radial_d / rk - k * radial / (rk * r);

    const Complex w(x, d.m_sign * y);
    const Complex wk = ipow(w, k);
    const Complex wkm1 = (k > 0) ? ipow(w, k - 1) : Complex(0.0, 0.0);
    const double gleg = d.leg(ucos);
    const double gleg_d = (d.leg.degree() > 0) ? d.leg_d(ucos) : 0.0;

    const Complex phase = std::exp(Complex(0.0, -d.energy * t));
    const Complex c = d.t.coeff * phase * d.kappa;

    const Complex term = c * tt * wk * gleg;
    u += term;
    scale_sum += std::abs(term);
    lap += (-2.0 / r + 1.0 / (static_cast<double>(n) * n)) * term;
    dt += Complex(0.0, -d.energy) * term;

    const Complex radial_part = c * tt_d * wk * gleg;
    const Complex wderiv = c * tt * static_cast<double>(k) * wkm1 * gleg;
    const Complex angular = c * tt * wk * gleg_d;
    g0 += radial_part * (x / r) + wderiv + angular * grad_u[0];
    g1 += radial_part * (y / r) + wderiv * Complex(0.0, d.m_sign) + angular * grad_u[1];
    g2 += radial_part * (z / r) + angular * grad_u[2];
  }

  e.u = u;
  e.du[0] = g0;
  e.du[1] = g1;
  e.du[2] = g2;
  e.lap_u = lap;
  e.dt_u = dt;
  e.log_env = 0.0;
  e.term_scale = scale_sum;
  return e;
}

PotentialSpec HydrogenSuperposition::natural_potential() const {
  return PotentialSpec::coulomb3d();
}

double HydrogenSuperposition::bulk_halfwidth() const {
  int nmax = 1;
  for (const Term& t : terms_) nmax = std::max(nmax, t.n);
  return 20.0 * nmax;
}

// ---------------------------------------------------------------------------
// Derived fields

namespace {

double quantum_potential_from(const PsiEval& e, double mass) {
  const double den = std::norm(e.u);
  double grad2 = 0.0;
  double radial = 0.0;
  for (int i = 0; i < e.du.size(); ++i) {
    grad2 += std::norm(e.du[i]);
    const double re = std::real(std::conj(e.u) * e.du[i]);
    radial += re * re;
  }
  const double lap_term = std::real(std::conj(e.u) * e.lap_u);
  return -0.5 / mass * ((grad2 + lap_term) / den - radial / (den * den));
}

double q_at(const WaveFunction& state, Vec q, int axis, double delta, double t,
            double mass, double node_epsilon) {
  q[axis] += delta;
  const PsiEval e = state.eval(q, t);
  if (!(e.cancellation() >= node_epsilon)) throw NodeProximityError(q, t, e.cancellation());
  return quantum_potential_from(e, mass);
}

}  // namespace

Vec de_broglie_momentum(const WaveFunction& state, const Vec& q, double t,
                        double node_epsilon) {
  const PsiEval e = state.eval(q, t);
  if (!(e.cancellation() >= node_epsilon)) throw NodeProximityError(q, t, e.cancellation());
  return e.grad_S();
}

double quantum_potential(const WaveFunction& state, const Vec& q, double t,
                         double mass, double node_epsilon) {
  const PsiEval e = state.eval(q, t);
  if (!(e.cancellation() >= node_epsilon)) throw NodeProximityError(q, t, e.cancellation());
  return quantum_potential_from(e, mass);
}

Vec quantum_force(const WaveFunction& state, const Vec& q, double t, double mass,
                  const QForceOptions& opts) {
  const PsiEval e = state.eval(q, t);
  if (!(e.cancellation() >= opts.node_epsilon))
    throw NodeProximityError(q, t, e.cancellation());
  if (auto f = state.analytic_quantum_force(q, t, mass)) return Vec{*f};

  // Five-point central differences of Q per axis, one Richardson level.
  const int d = state.dimension();
  Vec force(d);
  for (int i = 0; i < d; ++i) {
    auto deriv = [&](double h) {
      const double qm2 = q_at(state, q, i, -2.0 * h, t, mass, opts.node_epsilon);
      const double qm1 = q_at(state, q, i, -h, t, mass, opts.node_epsilon);
      const double qp1 = q_at(state, q, i, h, t, mass, opts.node_epsilon);
      const double qp2 = q_at(state, q, i, 2.0 * h, t, mass, opts.node_epsilon);
      return (qm2 - 8.0 * qm1 + 8.0 * qp1 - qp2) / (12.0 * h);
    };
    const double dh = deriv(opts.fd_step);
    const double dh2 = deriv(0.5 * opts.fd_step);
    force[i] = -(16.0 * dh2 - dh) / 15.0;
  }
  return force;
}

Vec acceleration(const WaveFunction& state, const PotentialSpec& potential,
                 const Vec& q, double t, double mass, const QForceOptions& opts) {
  const Vec fq = quantum_force(state, q, t, mass, opts);
  const Vec gv = potential.gradient(q);
  Vec a(state.dimension());
  for (int i = 0; i < a.size(); ++i) a[i] = (fq[i] - gv[i]) / mass;
  return a;
}

WaveSample evaluate(const WaveFunction& state, const Vec& q, double t, double mass,
                    const QForceOptions& opts) {
  const PsiEval e = state.eval(q, t);
  WaveSample s;
  s.position = q;
  s.time = t;
  s.psi = e.psi();
  s.grad_psi = CVec(e.du.size());
  const double env = std::exp(e.log_env);
  for (int i = 0; i < e.du.size(); ++i) s.grad_psi[i] = env * e.du[i];
  s.density = e.density();
  const int d = state.dimension();
  if (!(e.cancellation() >= opts.node_epsilon)) {
    s.near_node = true;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.velocity = Vec(d, nan);
    s.quantum_potential = nan;
    s.bohm_force = Vec(d, nan);
    return s;
  }
  const Vec gs = e.grad_S();
  s.velocity = (1.0 / mass) * gs;
  s.quantum_potential = quantum_potential_from(e, mass);
  const Vec fq = quantum_force(state, q, t, mass, opts);
  const Vec gv = state.natural_potential().gradient(q);
  s.bohm_force = Vec(d);
  for (int i = 0; i < d; ++i) s.bohm_force[i] = fq[i] - gv[i];
  return s;
}

}  // namespace pilotwave
