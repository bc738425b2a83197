#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "pilotwave/numerics.hpp"
#include "pilotwave/quantum_state.hpp"

using namespace pilotwave;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

OscillatorSuperposition psi_state(double th1, double th2) {
  return OscillatorSuperposition::normalized(
      {{0, 1.0, 0.0}, {1, 1.0, th1}, {2, 1.0, th2}});
}

OscillatorSuperposition ground_state() {
  return OscillatorSuperposition({{0, 1.0, 0.0}});
}

HydrogenSuperposition hydrogen_state() {
  using T = HydrogenSuperposition::Term;
  return HydrogenSuperposition::normalized(
      std::vector<T>{{1, 0, 0, Complex(1.0, 0.0)},
                     {2, 1, 1, std::exp(Complex(0.0, 1.0))},
                     {3, 2, -1, std::exp(Complex(0.0, 2.0))}});
}

}  // namespace

TEST_CASE("state validation") {
  using T = OscillatorSuperposition::Term;
  CHECK_THROWS_AS(OscillatorSuperposition({{0, 0.5, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(OscillatorSuperposition({{0, 1.0, 0.0}, {0, 0.0, 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(OscillatorSuperposition({{-1, 1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(OscillatorSuperposition(std::vector<T>{}), std::invalid_argument);
  using H = HydrogenSuperposition::Term;
  CHECK_THROWS_AS(HydrogenSuperposition({H{1, 1, 0, Complex(1, 0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(HydrogenSuperposition({H{2, 1, 2, Complex(1, 0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Oscillator2D(-1.0, 1.0, {{0, 0, 1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("psi at the origin matches the closed form") {
  const double th1 = 0.7, th2 = 2.3;
  const OscillatorSuperposition st = psi_state(th1, th2);
  const Complex got = st.eval(Vec{0.0}, 0.0).psi();
  const Complex expected = (1.0 / std::sqrt(3.0)) * std::pow(kPi, -0.25) *
                           (1.0 - std::exp(Complex(0.0, th2)) / std::sqrt(2.0));
  CHECK(std::abs(got - expected) < 1e-14);
}

TEST_CASE("ground state: velocity zero, V+Q = E0, zero force and acceleration") {
  const OscillatorSuperposition g = ground_state();
  for (double t : {0.0, 0.9, 4.0}) {
    for (double x : {-3.0, -0.5, 0.0, 1.7, 4.9}) {
      const WaveSample s = evaluate(g, Vec{x}, t);
      CHECK(!s.near_node);
      CHECK(std::abs(s.velocity[0]) < 1e-14);
      CHECK(s.quantum_potential == doctest::Approx(0.5 - 0.5 * x * x).epsilon(1e-11));
      CHECK(std::abs(s.bohm_force[0]) < 1e-10);
      const Vec a = acceleration(g, g.natural_potential(), Vec{x}, t);
      CHECK(std::abs(a[0]) < 1e-10);
    }
  }
}

TEST_CASE("density equals |psi|^2 and WaveSample flags nodes") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  const WaveSample s = evaluate(st, Vec{0.8}, 0.4);
  CHECK(s.density == doctest::Approx(std::norm(s.psi)).epsilon(1e-14));
  // pure phi_1 has a node at the origin
  const OscillatorSuperposition one({{1, 1.0, 0.0}});
  const WaveSample sn = evaluate(one, Vec{0.0}, 0.0);
  CHECK(sn.near_node);
  CHECK(std::isnan(sn.quantum_potential));
  CHECK_THROWS_AS(de_broglie_momentum(one, Vec{0.0}, 0.0), NodeProximityError);
}

TEST_CASE("eigenstate density is stationary") {
  const OscillatorSuperposition two({{2, 1.0, 0.4}});
  for (double x : {-1.3, 0.2, 2.4}) {
    const double d0 = two.eval(Vec{x}, 0.0).density();
    for (double t : {0.7, 3.1, 12.0})
      CHECK(two.eval(Vec{x}, t).density() == doctest::Approx(d0).epsilon(1e-12));
  }
}

TEST_CASE("oscillator norm by quadrature") {
  const OscillatorSuperposition st = psi_state(2.0, 4.0);
  for (double t : {0.0, 1.3}) {
    const double norm = integrate(
        [&](double x) { return st.eval(Vec{x}, t).density(); }, -12.0, 12.0, 48, 24);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("Hamilton-Jacobi residual vanishes at sample points") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  Rng rng(7);
  const PotentialSpec pot = st.natural_potential();
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-4.0, 4.0);
    const double t = rng.uniform(0.0, kTwoPi);
    const PsiEval e = st.eval(Vec{x}, t);
    if (e.cancellation() < 1e-11) continue;
    const double dsdt = e.dS_dt();
    const Vec gs = e.grad_S();
    const double q = quantum_potential(st, Vec{x}, t);
    const double residual = dsdt + 0.5 * gs.norm2() + pot.value(Vec{x}) + q;
    CHECK(std::abs(residual) < 1e-6);
  }
}

TEST_CASE("Hamilton-Jacobi residual for hydrogen") {
  const HydrogenSuperposition st = hydrogen_state();
  Rng rng(11);
  const PotentialSpec pot = st.natural_potential();
  for (int i = 0; i < 100; ++i) {
    Vec q{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    if (q.norm() < 0.3) continue;
    const double t = rng.uniform(0.0, 20.0);
    const PsiEval e = st.eval(q, t);
    if (e.cancellation() < 1e-11) continue;
    const double residual =
        e.dS_dt() + 0.5 * e.grad_S().norm2() + pot.value(q) + quantum_potential(st, q, t);
    CHECK(std::abs(residual) < 1e-6);
  }
}

TEST_CASE("continuity equation: analytic d rho/dt against FD divergence") {
  const OscillatorSuperposition st = psi_state(0.4, 2.9);
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-3.0, 3.0);
    const double t = rng.uniform(0.0, kTwoPi);
    const PsiEval e = st.eval(Vec{x}, t);
    if (e.cancellation() < 1e-9) continue;
    const double drho_dt = e.dlog_density_dt() * e.density();
    const double h = 1e-5;
    auto flux = [&](double xx) {
      const PsiEval ee = st.eval(Vec{xx}, t);
      return ee.density() * ee.grad_S()[0];
    };
    const double div = (flux(x + h) - flux(x - h)) / (2.0 * h);
    CHECK(std::abs(drho_dt + div) < 1e-6);
  }
}

TEST_CASE("continuity equation for hydrogen") {
  const HydrogenSuperposition st = hydrogen_state();
  Rng rng(29);
  for (int i = 0; i < 40; ++i) {
    Vec q{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    if (q.norm() < 0.5) continue;
    const double t = rng.uniform(0.0, 10.0);
    const PsiEval e = st.eval(q, t);
    if (e.cancellation() < 1e-9) continue;
    const double drho_dt = e.dlog_density_dt() * e.density();
    const double h = 1e-5;
    double div = 0.0;
    for (int ax = 0; ax < 3; ++ax) {
      auto flux = [&](double delta) {
        Vec qq = q;
        qq[ax] += delta;
        const PsiEval ee = st.eval(qq, t);
        return ee.density() * ee.grad_S()[ax];
      };
      div += (flux(h) - flux(-h)) / (2.0 * h);
    }
    CHECK(std::abs(drho_dt + div) < 1e-6);
  }
}

TEST_CASE("de Broglie momentum agrees with unwrapped phase differences") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  const double t = 0.8;
  // integrate grad S along a short path and compare with the phase change
  const double x0 = 0.3, x1 = 0.9;
  const int n = 2000;
  double path_integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xm = x0 + (x1 - x0) * (i + 0.5) / n;
    path_integral += de_broglie_momentum(st, Vec{xm}, t)[0] * (x1 - x0) / n;
  }
  double phase_change = 0.0;
  Complex prev = st.eval(Vec{x0}, t).psi();
  for (int i = 1; i <= n; ++i) {
    const double x = x0 + (x1 - x0) * i / n;
    const Complex cur = st.eval(Vec{x}, t).psi();
    phase_change += std::arg(cur / prev);  // increment stays on the principal branch
    prev = cur;
  }
  CHECK(std::abs(path_integral - phase_change) < 1e-8);
}

TEST_CASE("1-D analytic quantum force matches finite differences of Q") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  Rng rng(17);
  int used = 0;
  while (used < 1000) {
    const double x = rng.uniform(-5.0, 5.0);
    const double t = rng.uniform(0.0, kTwoPi);
    if (st.eval(Vec{x}, t).cancellation() < 1e-8) continue;
    ++used;
    const double analytic = *st.analytic_quantum_force(Vec{x}, t, 1.0);
    const double h = 1e-4;
    auto qp = [&](double xx) { return quantum_potential(st, Vec{xx}, t); };
    const double fd =
        -(qp(x - 2 * h) - 8 * qp(x - h) + 8 * qp(x + h) - qp(x + 2 * h)) / (12 * h);
    CHECK(std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-3}) <
          1e-6);
  }
}

TEST_CASE("acceleration at (x=5, t=1) respects the tail bound") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  const Vec a = acceleration(st, st.natural_potential(), Vec{5.0}, 1.0);
  CHECK(a[0] > -2.0 / 25.0);
}

TEST_CASE("acceleration field satisfies a + 2/x^2 > 0 on the (3,10) grid") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  const PotentialSpec pot = st.natural_potential();
  double worst = 1e30;
  for (int it = 0; it < 40; ++it) {
    const double t = kTwoPi * (it + 0.5) / 40;
    for (int ix = 0; ix < 80; ++ix) {
      const double x = 3.0 + 7.0 * ix / 79.0;
      const double a = acceleration(st, pot, Vec{x}, t)[0];
      worst = std::min(worst, a + 2.0 / (x * x));
    }
  }
  CHECK(worst > 0.0);
}

TEST_CASE("hydrogen norm by radial-angular quadrature") {
  const HydrogenSuperposition st = hydrogen_state();
  const GlRule& ang = gauss_legendre(32);
  const int nphi = 48;
  double total = 0.0;
  const double rmax = 70.0;
  const GlRule& rad = gauss_legendre(24);
  const int rpanels = 24;
  for (int rp = 0; rp < rpanels; ++rp) {
    const double lo = rmax * rp / rpanels, hi = rmax * (rp + 1) / rpanels;
    for (int ir = 0; ir < 24; ++ir) {
      const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rad.nodes[ir];
      const double wr = 0.5 * (hi - lo) * rad.weights[ir];
      for (int ic = 0; ic < 32; ++ic) {
        const double ct = ang.nodes[ic];
        const double stheta = std::sqrt(1.0 - ct * ct);
        for (int ip = 0; ip < nphi; ++ip) {
          const double phi = kTwoPi * ip / nphi;
          const Vec q{r * stheta * std::cos(phi), r * stheta * std::sin(phi), r * ct};
          total += wr * ang.weights[ic] * (kTwoPi / nphi) * r * r *
                   st.eval(q, 0.0).density();
        }
      }
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("hydrogen gradient against finite differences") {
  const HydrogenSuperposition st = hydrogen_state();
  Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    Vec q{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    if (q.norm() < 0.4) continue;
    const double t = rng.uniform(0.0, 10.0);
    const PsiEval e = st.eval(q, t);
    const double h = 1e-6;
    for (int ax = 0; ax < 3; ++ax) {
      Vec qp = q, qm = q;
      qp[ax] += h;
      qm[ax] -= h;
      const Complex fd = (st.eval(qp, t).psi() - st.eval(qm, t).psi()) / (2.0 * h);
      CHECK(std::abs(e.du[ax] - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
    }
    // Laplacian identity from the eigenvalue relation, cross-checked by FD.
    Complex lap_fd(0.0, 0.0);
    const double h2 = 1e-4;
    for (int ax = 0; ax < 3; ++ax) {
      Vec qp = q, qm = q;
      qp[ax] += h2;
      qm[ax] -= h2;
      lap_fd += (st.eval(qp, t).psi() - 2.0 * e.psi() + st.eval(qm, t).psi()) / (h2 * h2);
    }
    CHECK(std::abs(e.lap_u - lap_fd) < 2e-5 * std::max(1.0, std::abs(lap_fd)));
  }
  // gradient on the z-axis stays finite and correct (w = 0 corner case)
  const Vec qz{0.0, 0.0, 1.3};
  const PsiEval ez = st.eval(qz, 0.5);
  for (int ax = 0; ax < 3; ++ax) {
    Vec qp = qz, qm = qz;
    qp[ax] += 1e-6;
    qm[ax] -= 1e-6;
    const Complex fd = (st.eval(qp, 0.5).psi() - st.eval(qm, 0.5).psi()) / 2e-6;
    CHECK(std::abs(ez.du[ax] - fd) < 1e-7);
  }
}

TEST_CASE("hydrogen far field: quantum force cancels Coulomb, leaving m^2/rho^3") {
  // Far outside the packet the n=3 term dominates, so psi is close to a
  // stationary state with phase S = m*phi. The Hamilton-Jacobi identity
  // V + Q = E_3 - |grad S|^2/2 then makes the total force the gradient of
  // m^2/(2 rho^2) (rho = cylindrical radius), not the bare Coulomb force.
  const HydrogenSuperposition st = hydrogen_state();
  const PotentialSpec pot = st.natural_potential();
  for (const auto& [r, tol] : std::vector<std::pair<double, double>>{{50.0, 0.10},
                                                                     {80.0, 0.02}}) {
    const Vec q{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
    const Vec a = acceleration(st, pot, q, 0.0);
    const double rho = std::sqrt(q[0] * q[0] + q[1] * q[1]);
    const double a_norm = a.norm();
    CHECK(a_norm < 0.05 * pot.gradient(q).norm());  // Coulomb nearly cancelled
    CHECK(a_norm == doctest::Approx(1.0 / (rho * rho * rho)).epsilon(tol));
    // direction is centripetal in the x-y plane
    CHECK(a[0] < 0.0);
    CHECK(a[1] < 0.0);
    CHECK(std::abs(a[2]) < 0.2 * a_norm);
  }
}

TEST_CASE("oscillator2d ground product state has zero force and velocity") {
  const Oscillator2D g(1.0, 1.0, {{0, 0, 1.0, 0.0}});
  for (double t : {0.0, 1.7}) {
    for (double x : {-1.0, 0.3}) {
      for (double y : {-0.8, 1.2}) {
        const Vec q{x, y};
        const PsiEval e = g.eval(q, t);
        CHECK(e.grad_S().norm() < 1e-13);
        const Vec f = quantum_force(g, q, t, 1.0);
        const Vec gv = g.natural_potential().gradient(q);
        CHECK(std::abs(f[0] - gv[0]) < 1e-8);
        CHECK(std::abs(f[1] - gv[1]) < 1e-8);
      }
    }
  }
  // scaled mass/omega: V + Q = E_00 = omega at the ground state
  const Oscillator2D gs(8.0, 1.5, {{0, 0, 1.0, 0.0}});
  const Vec q{0.4, -0.2};
  const double vq = gs.natural_potential().value(q) + quantum_potential(gs, q, 0.0, 8.0);
  CHECK(vq == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("oscillator2d norm and marginal consistency") {
  const Oscillator2D st = Oscillator2D::normalized(
      8.0, 1.5, {{0, 0, 1.0, 0.0}, {1, 0, 1.0, 2.0}, {2, 0, 1.0, 4.0}});
  const double half = st.bulk_halfwidth();
  const double norm = integrate(
      [&](double x) {
        return integrate(
            [&](double y) { return st.eval(Vec{x, y}, 0.7).density(); }, -half, half,
            24, 16);
      },
      -half, half, 24, 16);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("envelope-stripped evaluation survives the deep tail") {
  const OscillatorSuperposition st = psi_state(1.1, 1.8);
  for (double x : {50.0, 200.0, 1000.0}) {
    const PsiEval e = st.eval(Vec{x}, 0.7);
    CHECK(e.cancellation() > 1e-6);  // no node out there
    CHECK(std::isfinite(e.grad_S()[0]));
    const double f = *st.analytic_quantum_force(Vec{x}, 0.7, 1.0);
    CHECK(std::isfinite(f));
    // total acceleration ~ -b cos(t - offset)/x^2: tiny but finite
    const double a = f - x;
    CHECK(std::abs(a) < 10.0 / (x * x));
  }
}
