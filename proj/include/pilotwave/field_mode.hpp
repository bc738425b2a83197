#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pilotwave/ensemble.hpp"
#include "pilotwave/quantum_state.hpp"

namespace pilotwave {

// Decoupled scalar-field mode on expanding flat space, short-wavelength
// regime: the pair (q_k1, q_k2) behaves as a 2-D oscillator with mass a^3
// and angular frequency k/a. a is held constant over a run; callers assert
// the short-wavelength condition lambda_phys << 1/H themselves.
struct FieldModeSpec {
  double k = 1.0;  // wavenumber
  double a = 1.0;  // scale factor

  double effective_mass() const { return a * a * a; }
  double omega() const { return k / a; }
  double period() const { return 6.283185307179586 / omega(); }
};

struct MappedOscillator {
  double mass = 1.0;
  double omega = 1.0;
  PotentialSpec potential;  // (1/2) a k^2 (q1^2 + q2^2) = (1/2) m w^2 |q|^2
};

// Rejects nonpositive a or k.
MappedOscillator mode_to_oscillator(const FieldModeSpec& spec);

struct ModeRunConfig {
  // Blob parameters in the unit-oscillator coordinates xi = sqrt(m w) q;
  // they are mapped onto the physical mode coordinates internally.
  double center_xi1 = 2.5;   // on-shell center along lowered axis 1
  double p_offset_xi = 0.0;  // radial momentum offset in unit coordinates
  double sigma_xi = 0.05;
  std::size_t n = 2000;
  std::uint64_t seed = 1;
  double t1_periods = 1.0;   // run length in mapped periods
  int checkpoints = 5;
  IntegratorConfig integrator;
  int threads = 1;
};

struct ModeRunResult {
  std::vector<double> times;
  std::vector<EnsembleDiagnostics> diagnostics;
  Ensemble final_ensemble;
};

// Ensemble pipeline on the mapped 2-D problem. Escape of |q| past the mapped
// escape radius stands in for unboundedly growing field amplitudes.
ModeRunResult mode_instability_run(const FieldModeSpec& spec, const Oscillator2D& state,
                                   const ModeRunConfig& cfg);

}  // namespace pilotwave
