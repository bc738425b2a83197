#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pilotwave/field_mode.hpp"

using namespace pilotwave;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Oscillator2D mode_state(double mass, double omega, double th1, double th2) {
  return Oscillator2D::normalized(
      mass, omega, {{0, 0, 1.0, 0.0}, {1, 0, 1.0, th1}, {2, 0, 1.0, th2}});
}

}  // namespace

TEST_CASE("mode mapping arithmetic") {
  const MappedOscillator a = mode_to_oscillator(FieldModeSpec{1.0, 1.0});
  CHECK(a.mass == 1.0);
  CHECK(a.omega == 1.0);
  const MappedOscillator b = mode_to_oscillator(FieldModeSpec{3.0, 2.0});
  CHECK(b.mass == doctest::Approx(8.0));
  CHECK(b.omega == doctest::Approx(1.5));
  // (1/2) a k^2 = (1/2) m w^2
  const Vec q{0.7, -0.4};
  CHECK(b.potential.value(q) ==
        doctest::Approx(0.5 * b.mass * b.omega * b.omega * q.norm2()));
  CHECK_THROWS_AS(mode_to_oscillator(FieldModeSpec{-1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(mode_to_oscillator(FieldModeSpec{1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("product ground state of the mapped mode feels no net force") {
  const MappedOscillator m = mode_to_oscillator(FieldModeSpec{3.0, 2.0});
  const Oscillator2D g(m.mass, m.omega, {{0, 0, 1.0, 0.0}});
  for (double x : {-0.3, 0.2}) {
    for (double y : {-0.1, 0.4}) {
      const Vec q{x, y};
      const Vec fq = quantum_force(g, q, 0.0, m.mass);
      const Vec gv = m.potential.gradient(q);
      CHECK(std::abs(fq[0] - gv[0]) < 1e-7);
      CHECK(std::abs(fq[1] - gv[1]) < 1e-7);
    }
  }
}

TEST_CASE("on-shell start reduces the second-order flow to the first-order one") {
  const MappedOscillator m = mode_to_oscillator(FieldModeSpec{3.0, 2.0});
  const Oscillator2D st = mode_state(m.mass, m.omega, 1.1, 1.8);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-10;
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.05 * i * kTwoPi / m.omega);
  const Vec q0{0.1, 0.05};
  const Trajectory deb = integrate_de_broglie(st, q0, 0.0, times.back(), cfg, m.mass, times);
  const Vec p0 = de_broglie_momentum(st, q0, 0.0);
  const Trajectory bohm =
      integrate_bohm(st, m.potential, q0, p0, 0.0, times.back(), cfg, m.mass, times);
  REQUIRE(deb.samples.size() == bohm.samples.size());
  for (std::size_t i = 0; i < deb.samples.size(); ++i) {
    CHECK(std::abs(deb.samples[i].q[0] - bohm.samples[i].q[0]) < 1e-7);
    CHECK(std::abs(deb.samples[i].q[1] - bohm.samples[i].q[1]) < 1e-7);
  }
}

TEST_CASE("trajectories map onto the unit oscillator under rescaling") {
  // A mapped trajectory q(t) with (mass, omega) equals the unit-oscillator
  // trajectory xi(tau) via xi = sqrt(m w) q, tau = w t.
  for (const auto& [a, k] : std::vector<std::pair<double, double>>{{2.0, 3.0}, {1.5, 1.0}}) {
    const MappedOscillator m = mode_to_oscillator(FieldModeSpec{k, a});
    const Oscillator2D scaled = mode_state(m.mass, m.omega, 0.7, 2.1);
    const Oscillator2D unit = mode_state(1.0, 1.0, 0.7, 2.1);
    const double su = std::sqrt(m.mass * m.omega);

    IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-11;
    const double tau1 = 3.0;
    const Vec xi0{0.4, -0.2};
    const Vec q0{xi0[0] / su, xi0[1] / su};

    std::vector<double> taus, ts;
    for (int i = 0; i <= 10; ++i) {
      taus.push_back(tau1 * i / 10.0);
      ts.push_back(tau1 * i / 10.0 / m.omega);
    }
    const Trajectory unit_tr = integrate_de_broglie(unit, xi0, 0.0, tau1, cfg, 1.0, taus);
    const Trajectory sc_tr =
        integrate_de_broglie(scaled, q0, 0.0, tau1 / m.omega, cfg, m.mass, ts);
    REQUIRE(unit_tr.samples.size() == sc_tr.samples.size());
    for (std::size_t i = 0; i < unit_tr.samples.size(); ++i) {
      CHECK(std::abs(unit_tr.samples[i].q[0] - su * sc_tr.samples[i].q[0]) < 1e-8);
      CHECK(std::abs(unit_tr.samples[i].q[1] - su * sc_tr.samples[i].q[1]) < 1e-8);
    }
  }
}

TEST_CASE("mode run at (a,k) = (1,1) is the particle run, bit for bit") {
  const FieldModeSpec spec{1.0, 1.0};
  const Oscillator2D state = mode_state(1.0, 1.0, 2.0, 4.0);
  ModeRunConfig mr;
  mr.n = 100;
  mr.seed = 3141;
  mr.checkpoints = 2;
  mr.t1_periods = 0.25;
  mr.integrator.rel_tol = 1e-8;
  mr.integrator.abs_tol = 1e-8;
  const ModeRunResult mode = mode_instability_run(spec, state, mr);

  PhasePoint center = on_shell_point(state, Vec{mr.center_xi1, 0.0}, 0.0);
  Ensemble ens = sample_blob(center, mr.sigma_xi, mr.sigma_xi, mr.n, mr.seed);
  std::vector<EnsembleDiagnostics> particle;
  particle.push_back(diagnostics(ens, state, mr.integrator.node_epsilon));
  const PotentialSpec pot = PotentialSpec::field_mode2d(1.0, 1.0);
  for (int c = 1; c <= mr.checkpoints; ++c) {
    const double tc = mr.t1_periods * kTwoPi * c / mr.checkpoints;
    ens = evolve(ens, state, pot, Law::bohm, tc, mr.integrator, 1.0, 1);
    particle.push_back(diagnostics(ens, state, mr.integrator.node_epsilon));
  }
  REQUIRE(mode.diagnostics.size() == particle.size());
  for (std::size_t i = 0; i < particle.size(); ++i) {
    CHECK(mode.diagnostics[i].momentum_deviation == particle[i].momentum_deviation);
    CHECK(mode.diagnostics[i].position_ks == particle[i].position_ks);
    CHECK(mode.diagnostics[i].escape_fraction == particle[i].escape_fraction);
  }
}

TEST_CASE("state built with the wrong mass/omega is rejected") {
  const FieldModeSpec spec{3.0, 2.0};
  const Oscillator2D wrong = mode_state(1.0, 1.0, 2.0, 4.0);
  ModeRunConfig mr;
  mr.n = 10;
  CHECK_THROWS_AS(mode_instability_run(spec, wrong, mr), std::invalid_argument);
}

TEST_CASE("off-shell radial kick above threshold escapes within ten periods") {
  const FieldModeSpec spec{3.0, 2.0};
  const MappedOscillator m = mode_to_oscillator(spec);
  const Oscillator2D state = mode_state(m.mass, m.omega, 1.1, 1.8);
  ModeRunConfig mr;
  mr.n = 60;
  mr.seed = 7;
  mr.center_xi1 = 5.0;
  mr.p_offset_xi = 1.1 * escape_velocity(2.0, 5.0);
  mr.t1_periods = 10.0;
  mr.checkpoints = 4;
  mr.integrator.rel_tol = 1e-8;
  mr.integrator.abs_tol = 1e-8;
  mr.threads = 2;
  const ModeRunResult r = mode_instability_run(spec, state, mr);
  CHECK(r.diagnostics.back().escape_fraction > 0.0);
}
