#include "pilotwave/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pilotwave {

namespace {

Polynomial<Rational> to_rational(const Polynomial<double>& p) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (double x : p.coeffs()) c.emplace_back(x);
  return Polynomial<Rational>(std::move(c));
}

}  // namespace

double DensityPolynomial::p_at(double x) const {
  double acc = alphas.back();
  for (int i = static_cast<int>(alphas.size()) - 2; i >= 0; --i) acc = acc * x + alphas[i];
  return acc;
}

DensityPolynomial density_polynomial(const OscillatorSuperposition& state, double t) {
  const std::vector<Complex> g = state.polynomial_coefficients(t);
  const int n = static_cast<int>(g.size());
  DensityPolynomial out;
  out.t = t;
  out.degree = 2 * (n - 1);
  out.alphas.assign(out.degree + 1, 0.0);
  // P = G * conj(G); imaginary parts cancel pairwise.
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      out.alphas[j + k] += std::real(g[j] * std::conj(g[k]));
  return out;
}

Polynomial<Rational> AccelerationPoly::exact_numerator(const DensityPolynomial& poly) {
  const Polynomial<Rational> p = to_rational(Polynomial<double>(poly.alphas));
  const Polynomial<Rational> p1 = p.derivative();
  const Polynomial<Rational> p2 = p1.derivative();
  const Polynomial<Rational> p3 = p2.derivative();
  const Rational two(2), minus_two(-2);
  Polynomial<Rational> num = p * p * p3;
  num = num + p1 * p1 * p1;
  num = num + (p * p1 * p2) * minus_two;
  num = num + (p * p * p2).shifted() * minus_two;
  num = num + (p * p * p1) * minus_two;
  num = num + (p * (p1 * p1)).shifted() * two;
  return num;
}

AccelerationPoly::AccelerationPoly(const DensityPolynomial& poly)
    : p_(Polynomial<double>(poly.alphas)) {
  const Polynomial<Rational> num = exact_numerator(poly);
  std::vector<double> c;
  c.reserve(num.coeffs().size());
  for (const Rational& r : num.coeffs()) c.push_back(static_cast<double>(r));
  numerator_ = Polynomial<double>(std::move(c)).trimmed();
}

double AccelerationPoly::operator()(double x) const {
  const double pv = p_(x);
  if (!(pv > 0.0))
    throw std::domain_error("rational_acceleration: P(x) <= 0 (node or invalid state)");
  return numerator_(x) / (4.0 * pv * pv * pv);
}

double rational_acceleration(const DensityPolynomial& poly, double x) {
  return AccelerationPoly(poly)(x);
}

AsymptoticBound asymptotic_bound(const OscillatorSuperposition& state) {
  AsymptoticBound out;
  const auto& terms = state.terms();
  const int m_top = state.max_level();
  const auto* top = &terms.back();
  const OscillatorSuperposition::Term* below = nullptr;
  for (const auto& t : terms)
    if (t.level == m_top - 1) below = &t;
  if (below == nullptr || below->modulus == 0.0) {
    out.degenerate = true;
    out.b = 0.0;
    out.phase_offset = 0.0;
    return out;
  }
  out.b = below->modulus / top->modulus * std::sqrt(0.5 * m_top);
  out.phase_offset = top->phase - below->phase;
  return out;
}

BoundReport verify_bound(const OscillatorSuperposition& state,
                         const BoundCheckConfig& cfg, const GridSink& sink) {
  if (!(cfg.x_min > 0.0) || !(cfg.x_max > cfg.x_min) || cfg.nx < 2 || cfg.nt < 1)
    throw std::invalid_argument("verify_bound: bad grid");
  BoundReport rep;
  rep.grid_min_shifted = std::numeric_limits<double>::infinity();
  rep.grid_min_scaled = std::numeric_limits<double>::infinity();

  const AsymptoticBound bound = asymptotic_bound(state);

  for (int it = 0; it < cfg.nt; ++it) {
    const double t = cfg.t_min + (cfg.t_max - cfg.t_min) * (it + 0.5) / cfg.nt;
    const DensityPolynomial poly = density_polynomial(state, t);
    const AccelerationPoly accel(poly);
    for (int ix = 0; ix < cfg.nx; ++ix) {
      const double f = static_cast<double>(ix) / (cfg.nx - 1);
      const double x = cfg.log_x
                           ? cfg.x_min * std::pow(cfg.x_max / cfg.x_min, f)
                           : cfg.x_min + (cfg.x_max - cfg.x_min) * f;
      if (!(poly.p_at(x) > 0.0)) {
        ++rep.nodes_excluded;
        continue;
      }
      const double a = accel(x);
      const double shifted = a + cfg.b_check / (x * x);
      if (shifted < rep.grid_min_shifted) {
        rep.grid_min_shifted = shifted;
        rep.argmin_x = x;
        rep.argmin_t = t;
      }
      rep.grid_min_scaled = std::min(rep.grid_min_scaled, a * x * x + cfg.b_check);
      if (sink) sink(x, t, a, shifted);
    }
    if (!bound.degenerate) {
      const double ref = std::cos(t - bound.phase_offset) * bound.b;
      const double x_hi = cfg.x_max;
      const double x_in = cfg.x_max / 10.0;
      if (poly.p_at(x_hi) > 0.0)
        rep.asym_residual =
            std::max(rep.asym_residual, std::abs(accel(x_hi) * x_hi * x_hi + ref));
      if (x_in >= cfg.x_min && poly.p_at(x_in) > 0.0)
        rep.asym_residual_inner =
            std::max(rep.asym_residual_inner, std::abs(accel(x_in) * x_in * x_in + ref));
    }
  }
  rep.grid_pass = rep.grid_min_shifted > 0.0;
  rep.asym_pass = bound.degenerate || rep.asym_residual < cfg.asym_rel_tol * bound.b;
  return rep;
}

}  // namespace pilotwave
