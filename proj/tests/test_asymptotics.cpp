#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pilotwave/asymptotics.hpp"
#include "pilotwave/special_functions.hpp"
#include "pilotwave/numerics.hpp"

using namespace pilotwave;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

OscillatorSuperposition psi_state(double th1, double th2) {
  return OscillatorSuperposition::normalized(
      {{0, 1.0, 0.0}, {1, 1.0, th1}, {2, 1.0, th2}});
}

OscillatorSuperposition random_state(Rng& rng, int m_top, bool dense) {
  std::vector<OscillatorSuperposition::Term> terms;
  if (dense) {
    for (int m = 0; m <= m_top; ++m)
      terms.push_back({m, rng.uniform(0.5, 1.0), rng.uniform(0.0, kTwoPi)});
  } else {
    if (m_top >= 2) terms.push_back({0, rng.uniform(0.5, 1.0), rng.uniform(0.0, kTwoPi)});
    terms.push_back({m_top - 1, rng.uniform(0.5, 1.0), rng.uniform(0.0, kTwoPi)});
    terms.push_back({m_top, rng.uniform(0.5, 1.0), rng.uniform(0.0, kTwoPi)});
  }
  return OscillatorSuperposition::normalized(std::move(terms));
}

double hermite_top(int m) { return std::ldexp(1.0, m); }  // coeff(H_m, m) = 2^m

}  // namespace

TEST_CASE("pure ground state: P = 1/sqrt(pi), order zero") {
  const OscillatorSuperposition g({{0, 1.0, 0.0}});
  const DensityPolynomial p = density_polynomial(g, 0.37);
  CHECK(p.degree == 0);
  CHECK(p.alphas.size() == 1);
  CHECK(p.alphas[0] == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-14));
  // and the acceleration field vanishes identically
  for (double x : {-3.0, 0.1, 2.0, 50.0})
    CHECK(std::abs(rational_acceleration(p, x)) < 1e-14);
}

TEST_CASE("alpha_N matches the closed form for random states") {
  Rng rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    const int m_top = 1 + static_cast<int>(rng.uniform() * 6.0);
    const OscillatorSuperposition st = random_state(rng, m_top, trial % 2 == 0);
    const double c_m = st.terms().back().modulus;
    const double expected = c_m * c_m / std::sqrt(kPi) /
                            (std::ldexp(1.0, m_top) * pilotwave::factorial(m_top)) *
                            hermite_top(m_top) * hermite_top(m_top);
    for (double t : {0.0, 1.234}) {
      const DensityPolynomial p = density_polynomial(st, t);
      CHECK(p.degree == 2 * m_top);
      CHECK(p.alphas[p.degree] == doctest::Approx(expected).epsilon(1e-12));
      CHECK(p.alphas[p.degree] > 0.0);
    }
  }
}

TEST_CASE("alpha_{N-1}(t) carries the cos(t - (theta_M - theta_{M-1})) phase") {
  Rng rng(202);
  for (int trial = 0; trial < 8; ++trial) {
    const int m_top = 1 + static_cast<int>(rng.uniform() * 6.0);
    const OscillatorSuperposition st = random_state(rng, m_top, true);
    const auto& terms = st.terms();
    const double c_m = terms.back().modulus, th_m = terms.back().phase;
    const double c_b = terms[terms.size() - 2].modulus,
                 th_b = terms[terms.size() - 2].phase;
    const double pref = 2.0 * c_m * c_b * std::sqrt(2.0 * m_top / kPi) /
                        (std::ldexp(1.0, m_top) * pilotwave::factorial(m_top)) *
                        hermite_top(m_top) * hermite_top(m_top - 1);
    const double offset = th_m - th_b;
    for (double t : {0.0, kPi / 2.0, kPi}) {
      const DensityPolynomial p = density_polynomial(st, t);
      CHECK(p.alphas[p.degree - 1] ==
            doctest::Approx(pref * std::cos(t - offset)).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("reconstruction: e^{-x^2} P(x,t) equals |psi|^2") {
  Rng rng(303);
  for (int trial = 0; trial < 6; ++trial) {
    const int m_top = 1 + static_cast<int>(rng.uniform() * 6.0);
    const OscillatorSuperposition st = random_state(rng, m_top, trial % 2 == 1);
    const double t = rng.uniform(0.0, kTwoPi);
    const DensityPolynomial p = density_polynomial(st, t);
    for (int i = 0; i <= 100; ++i) {
      const double x = -10.0 + 0.2 * i;
      const double rec = std::exp(-x * x) * p.p_at(x);
      const double direct = st.eval(Vec{x}, t).density();
      CHECK(rec == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("rational acceleration rejects nonpositive P") {
  const OscillatorSuperposition one({{1, 1.0, 0.0}});  // node at x = 0
  const DensityPolynomial p = density_polynomial(one, 0.0);
  CHECK_THROWS_AS(rational_acceleration(p, 0.0), std::domain_error);
}

TEST_CASE("Eq-route acceleration agrees with the psi-route") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  Rng rng(404);
  int used = 0;
  while (used < 300) {
    const double x = rng.uniform(-6.0, 6.0);
    const double t = rng.uniform(0.0, kTwoPi);
    if (st.eval(Vec{x}, t).cancellation() < 1e-9) continue;
    ++used;
    const DensityPolynomial p = density_polynomial(st, t);
    const double a1 = rational_acceleration(p, x);
    const double a2 = acceleration(st, st.natural_potential(), Vec{x}, t)[0];
    CHECK(std::abs(a1 - a2) / std::max({std::abs(a1), std::abs(a2), 1e-10}) < 1e-8);
  }
}

TEST_CASE("x^{3N-1} cancellation is exact in rational arithmetic") {
  Rng rng(505);
  for (int trial = 0; trial < 20; ++trial) {
    const int m_top = 1 + static_cast<int>(rng.uniform() * 6.0);
    const OscillatorSuperposition st = random_state(rng, m_top, trial % 2 == 0);
    const DensityPolynomial p = density_polynomial(st, rng.uniform(0.0, kTwoPi));
    const Polynomial<Rational> num = AccelerationPoly::exact_numerator(p);
    CHECK(num.coeff(3 * p.degree - 1) == Rational(0));
    // the surviving leading coefficient is -2 alpha_N^2 alpha_{N-1}
    const Rational an(p.alphas[p.degree]);
    const Rational anm1(p.alphas[p.degree - 1]);
    CHECK(num.coeff(3 * p.degree - 2) == Rational(-2) * an * an * anm1);
  }
}

TEST_CASE("floating-point numerator cancellation is at rounding level") {
  Rng rng(606);
  for (int trial = 0; trial < 10; ++trial) {
    const int m_top = 1 + static_cast<int>(rng.uniform() * 6.0);
    const OscillatorSuperposition st = random_state(rng, m_top, true);
    const DensityPolynomial dp = density_polynomial(st, rng.uniform(0.0, kTwoPi));
    // assemble the same numerator purely in doubles
    const Polynomial<double> p(dp.alphas);
    const Polynomial<double> p1 = p.derivative();
    const Polynomial<double> p2 = p1.derivative();
    const Polynomial<double> p3 = p2.derivative();
    Polynomial<double> num = p * p * p3 + p1 * p1 * p1 - (p * p1 * p2) * 2.0 -
                             (p * p * p2).shifted() * 2.0 - (p * p * p1) * 2.0 +
                             (p * (p1 * p1)).shifted() * 2.0;
    const double an = dp.alphas[dp.degree];
    const double scale = 2.0 * an * an * an * dp.degree * dp.degree;
    CHECK(std::abs(num.coeff(3 * dp.degree - 1)) < 1e-12 * scale);
  }
}

TEST_CASE("asymptotic bound coefficient and degenerate flag") {
  // equal-weight three-state: b = (|c1|/|c2|) sqrt(2/2) = 1
  const AsymptoticBound b1 = asymptotic_bound(psi_state(1.1, 1.8));
  CHECK(b1.b == doctest::Approx(1.0));
  CHECK(b1.phase_offset == doctest::Approx(1.8 - 1.1));
  CHECK(!b1.degenerate);

  // missing M-1 level
  const OscillatorSuperposition sk = OscillatorSuperposition::normalized(
      {{0, 1.0, 0.0}, {2, 1.0, 0.3}});
  const AsymptoticBound b2 = asymptotic_bound(sk);
  CHECK(b2.degenerate);
  CHECK(b2.b == 0.0);

  // pure eigenstate
  const OscillatorSuperposition pure({{3, 1.0, 0.0}});
  CHECK(asymptotic_bound(pure).degenerate);
}

TEST_CASE("b cross-check against x^2 * acceleration at cos = 1") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  const AsymptoticBound ab = asymptotic_bound(st);
  const double t = ab.phase_offset;  // cos(t - offset) = 1
  const DensityPolynomial p = density_polynomial(st, t);
  const double x = 1000.0;
  CHECK(-rational_acceleration(p, x) * x * x == doctest::Approx(ab.b).epsilon(0.01));
}

TEST_CASE("residual of the asymptotic form shrinks like 1/x") {
  Rng rng(707);
  for (int trial = 0; trial < 6; ++trial) {
    const int m_top = 1 + static_cast<int>(rng.uniform() * 6.0);
    const OscillatorSuperposition st = random_state(rng, m_top, false);
    const AsymptoticBound ab = asymptotic_bound(st);
    REQUIRE(!ab.degenerate);
    double prev = -1.0;
    for (double x : {100.0, 1000.0}) {
      double worst = 0.0;
      for (int it = 0; it < 16; ++it) {
        const double t = kTwoPi * it / 16.0;
        const DensityPolynomial p = density_polynomial(st, t);
        const double a = rational_acceleration(p, x);
        worst = std::max(worst, std::abs(a * x * x + ab.b * std::cos(t - ab.phase_offset)));
      }
      if (prev > 0.0) CHECK(worst < prev / 5.0);
      prev = worst;
    }
    CHECK(prev < 0.01 * ab.b);
  }
}

TEST_CASE("degenerate states decay faster than 1/x^2") {
  const OscillatorSuperposition sk = OscillatorSuperposition::normalized(
      {{0, 1.0, 0.4}, {3, 1.0, 1.9}});  // no M-1 term
  // fit the log-log slope of |a| between x = 1e2 and 1e3; expect <= -3
  double worst_slope = -1e9;
  for (int it = 0; it < 8; ++it) {
    const double t = kTwoPi * it / 8.0;
    const DensityPolynomial p = density_polynomial(sk, t);
    const double a2 = std::abs(rational_acceleration(p, 100.0));
    const double a3 = std::abs(rational_acceleration(p, 1000.0));
    if (a2 < 1e-300 || a3 < 1e-300) continue;
    worst_slope = std::max(worst_slope, std::log10(a3 / a2));
  }
  CHECK(worst_slope <= -3.0 + 0.05);
}

TEST_CASE("verify_bound reproduces the fig-1 scenario") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  BoundCheckConfig cfg;  // defaults: x in (3,10) 400 pts, t in (0,2pi) 200 pts
  int rows = 0;
  const BoundReport rep =
      verify_bound(st, cfg, [&](double, double, double, double) { ++rows; });
  CHECK(rows == 400 * 200);
  CHECK(rep.grid_pass);
  CHECK(rep.grid_min_shifted > 0.0);
  CHECK(rep.grid_min_shifted < 0.05);  // the bound is tight somewhere on the grid
  CHECK(rep.nodes_excluded == 0);
}

TEST_CASE("verify_bound holds out to x = 1000 on a log grid") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  BoundCheckConfig cfg;
  cfg.x_min = 10.0;
  cfg.x_max = 1000.0;
  cfg.nx = 60;
  cfg.log_x = true;
  cfg.nt = 32;
  const BoundReport rep = verify_bound(st, cfg);
  CHECK(rep.grid_pass);
  CHECK(rep.asym_pass);
  CHECK(rep.asym_residual < rep.asym_residual_inner / 5.0);
}
