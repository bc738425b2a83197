#pragma once

#include <vector>

#include "pilotwave/quantum_state.hpp"
#include "pilotwave/vec.hpp"

namespace pilotwave {

enum class Law { de_broglie, bohm };

enum class Termination { completed, escaped, node_abort, step_floor };

const char* to_string(Law law);
const char* to_string(Termination t);

struct PhasePoint {
  Vec q;
  Vec p;
  double t = 0.0;
};

struct Trajectory {
  Law law = Law::de_broglie;
  std::vector<PhasePoint> samples;  // strictly increasing (or decreasing) times
  Termination termination = Termination::completed;
  double termination_time = 0.0;
};

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double max_step = 0.1;
  double min_step = 1e-12;
  double escape_radius = 20.0;
  double node_epsilon = kDefaultNodeEpsilon;
  double fd_step = 1e-3;        // quantum-force stencil (d > 1)
  bool include_quantum = true;  // false: classical flow under V alone
  long max_steps = 2000000;     // attempt budget; exceeding it ends as step_floor

  void validate() const;
};

// First-order flow dq/dt = grad S / mass, adaptive Dormand-Prince 5(4).
// If sample_times is nonempty the integrator lands on those times exactly and
// records only there (plus the endpoints); otherwise every accepted step is
// recorded. Stored momenta equal grad S(q, t) by construction.
Trajectory integrate_de_broglie(const WaveFunction& state, const Vec& q0,
                                double t0, double t1, const IntegratorConfig& cfg,
                                double mass = 1.0,
                                const std::vector<double>& sample_times = {});

// Second-order flow m q'' = -grad(V+Q) as a first-order system in (q, p).
Trajectory integrate_bohm(const WaveFunction& state, const PotentialSpec& potential,
                          const Vec& q0, const Vec& p0, double t0, double t1,
                          const IntegratorConfig& cfg, double mass = 1.0,
                          const std::vector<double>& sample_times = {});

// sqrt(2 b / x0): threshold speed against an attractive a = -b/x^2 tail.
double escape_velocity(double b, double x0);

}  // namespace pilotwave
