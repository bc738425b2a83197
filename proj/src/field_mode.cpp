#include "pilotwave/field_mode.hpp"

#include <cmath>
#include <stdexcept>

namespace pilotwave {

MappedOscillator mode_to_oscillator(const FieldModeSpec& spec) {
  if (!(spec.a > 0.0) || !(spec.k > 0.0))
    throw std::invalid_argument("field mode: require a > 0 and k > 0");
  MappedOscillator m;
  m.mass = spec.effective_mass();
  m.omega = spec.omega();
  m.potential = PotentialSpec::field_mode2d(spec.a, spec.k);
  return m;
}

ModeRunResult mode_instability_run(const FieldModeSpec& spec, const Oscillator2D& state,
                                   const ModeRunConfig& cfg) {
  const MappedOscillator mapped = mode_to_oscillator(spec);
  if (std::abs(state.mass() - mapped.mass) > 1e-12 * mapped.mass ||
      std::abs(state.omega() - mapped.omega) > 1e-12 * mapped.omega)
    throw std::invalid_argument(
        "mode_instability_run: state was not built from the mapped oscillator");

  // Unit-coordinate blob parameters mapped to the physical mode coordinates:
  // q = xi / sqrt(m w), p = sqrt(m w) pi.
  const double su = std::sqrt(mapped.mass * mapped.omega);
  Vec q0{cfg.center_xi1 / su, 0.0};
  PhasePoint center = on_shell_point(state, q0, 0.0);
  const double r0 = q0.norm();
  if (cfg.p_offset_xi != 0.0 && r0 > 0.0) {
    const double off = cfg.p_offset_xi * su;
    center.p[0] += off * q0[0] / r0;
    center.p[1] += off * q0[1] / r0;
  }

  IntegratorConfig icfg = cfg.integrator;
  icfg.escape_radius = cfg.integrator.escape_radius / su;

  Ensemble ens = sample_blob(center, cfg.sigma_xi / su, cfg.sigma_xi * su, cfg.n,
                             cfg.seed);

  ModeRunResult out;
  const double t1 = cfg.t1_periods * spec.period();
  out.times.push_back(0.0);
  out.diagnostics.push_back(diagnostics(ens, state, icfg.node_epsilon));
  for (int c = 1; c <= cfg.checkpoints; ++c) {
    const double tc = t1 * c / cfg.checkpoints;
    if (ens.active_count() > 0) {
      ens = evolve(ens, state, mapped.potential, Law::bohm, tc, icfg, mapped.mass,
                   cfg.threads);
    } else {
      ens.t = tc;  // everything escaped or aborted; the snapshot is frozen
    }
    out.times.push_back(tc);
    out.diagnostics.push_back(diagnostics(ens, state, icfg.node_epsilon));
  }
  out.final_ensemble = std::move(ens);
  return out;
}

}  // namespace pilotwave
