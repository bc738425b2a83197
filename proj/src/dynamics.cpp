#include "pilotwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace pilotwave {

const char* to_string(Law law) {
  return law == Law::de_broglie ? "de_broglie" : "bohm";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::escaped: return "escaped";
    case Termination::node_abort: return "node_abort";
    case Termination::step_floor: return "step_floor";
  }
  return "?";
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("integrator: tolerances must be positive");
  if (!(min_step > 0.0) || !(min_step < max_step))
    throw std::invalid_argument("integrator: require 0 < min_step < max_step");
  if (!(escape_radius > 0.0))
    throw std::invalid_argument("integrator: escape_radius must be positive");
  if (!(node_epsilon > 0.0) || !(fd_step > 0.0))
    throw std::invalid_argument("integrator: node_epsilon and fd_step must be positive");
  if (max_steps < 1) throw std::invalid_argument("integrator: max_steps must be positive");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// b5 - b4: weights of the embedded error estimate.
constexpr double kE[7] = {71.0 / 57600,    0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// rhs returns false when the wave amplitude has cancelled away underneath the
// stage point; the driver then shrinks the step instead of trusting the value.
using Rhs = std::function<bool(double, const Vec&, Vec&)>;
using Record = std::function<void(double, const Vec&)>;
using EscapeTest = std::function<bool(const Vec&)>;

struct DriveResult {
  Termination term = Termination::completed;
  double t_end = 0.0;
};

DriveResult drive(const Rhs& rhs, Vec& y, double t0, double t1,
                  const IntegratorConfig& cfg, std::vector<double> sample_times,
                  const Record& record, const EscapeTest& escaped) {
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const int n = y.size();

  // Keep only strictly interior sample times, ordered along the direction.
  std::sort(sample_times.begin(), sample_times.end());
  if (dir < 0) std::reverse(sample_times.begin(), sample_times.end());
  std::size_t next_sample = 0;
  auto skip_passed = [&](double t) {
    while (next_sample < sample_times.size() &&
           dir * (sample_times[next_sample] - t) <= 1e-14 * std::max(1.0, span))
      ++next_sample;
  };

  record(t0, y);
  skip_passed(t0);
  if (span == 0.0) return {Termination::completed, t0};

  double t = t0;
  double last_recorded = t0;
  double h = dir * std::min(cfg.max_step, span);
  Vec k[7];
  for (auto& v : k) v = Vec(n);

  long attempts = 0;
  while (dir * (t1 - t) > 1e-14 * std::max(1.0, span)) {
    if (++attempts > cfg.max_steps) return {Termination::step_floor, t};
    // Clip to the next mandatory landing time (never beyond t1).
    double target = t1;
    if (next_sample < sample_times.size()) target = sample_times[next_sample];
    if (dir * (target - t1) > 0.0) target = t1;
    if (std::abs(h) > std::abs(target - t)) h = target - t;

    bool node_fail = false;
    Vec ynew(n);
    double err = 0.0;

    if (!rhs(t, y, k[0])) {
      node_fail = true;
    } else {
      for (int s = 1; s < 7 && !node_fail; ++s) {
        Vec ys = y;
        for (int j = 0; j < s; ++j) ys += (h * kA[s][j]) * k[j];
        if (!rhs(t + kC[s] * h, ys, k[s])) node_fail = true;
      }
      if (!node_fail) {
        ynew = y;
        for (int j = 0; j < 6; ++j) ynew += (h * kA[6][j]) * k[j];
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          double e = 0.0;
          for (int j = 0; j < 7; ++j) e += kE[j] * k[j][i];
          e *= h;
          const double sc =
              cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
          acc += (e / sc) * (e / sc);
        }
        err = std::sqrt(acc / n);
        if (!ynew.all_finite()) err = 2.0;  // force rejection
      }
    }

    if (node_fail) {
      h *= 0.5;
      if (std::abs(h) < cfg.min_step) return {Termination::node_abort, t};
      continue;
    }
    if (err > 1.0) {
      const double fac = std::max(0.1, 0.9 * std::pow(err, -0.2));
      h *= fac;
      if (std::abs(h) < cfg.min_step) return {Termination::step_floor, t};
      continue;
    }

    t += h;
    y = ynew;

    const bool at_sample = next_sample < sample_times.size() &&
                           dir * (sample_times[next_sample] - t) <= 1e-14 * std::max(1.0, span);
    if (sample_times.empty() || at_sample) {
      record(t, y);
      last_recorded = t;
    }
    skip_passed(t);

    if (escaped(y)) return {Termination::escaped, t};

    const double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    h *= fac;
    if (std::abs(h) > cfg.max_step) h = dir * cfg.max_step;
  }
  if (last_recorded != t) record(t, y);
  return {Termination::completed, t};
}

}  // namespace

Trajectory integrate_de_broglie(const WaveFunction& state, const Vec& q0, double t0,
                                double t1, const IntegratorConfig& cfg, double mass,
                                const std::vector<double>& sample_times) {
  cfg.validate();
  {
    const PsiEval e0 = state.eval(q0, t0);
    if (!(e0.cancellation() >= cfg.node_epsilon))
      throw NodeProximityError(q0, t0, e0.cancellation());
  }
  const int d = state.dimension();
  Trajectory traj;
  traj.law = Law::de_broglie;

  auto rhs = [&](double t, const Vec& q, Vec& dq) {
    const PsiEval e = state.eval(q, t);
    if (!(e.cancellation() >= cfg.node_epsilon)) return false;
    const Vec gs = e.grad_S();
    for (int i = 0; i < d; ++i) dq[i] = gs[i] / mass;
    return true;
  };
  auto record = [&](double t, const Vec& q) {
    PhasePoint pt;
    pt.q = q;
    pt.t = t;
    const PsiEval e = state.eval(q, t);
    pt.p = e.grad_S();  // p = grad S along a de Broglie trajectory
    traj.samples.push_back(pt);
  };
  auto escaped = [&](const Vec& q) { return q.norm() > cfg.escape_radius; };

  Vec y = q0;
  const DriveResult r = drive(rhs, y, t0, t1, cfg, sample_times, record, escaped);
  traj.termination = r.term;
  traj.termination_time = r.t_end;
  if (r.term != Termination::completed &&
      (traj.samples.empty() || traj.samples.back().t != r.t_end)) {
    PhasePoint pt;
    pt.q = y;
    pt.p = Vec(d);
    pt.t = r.t_end;
    const PsiEval e = state.eval(y, r.t_end);
    if (e.cancellation() >= cfg.node_epsilon) pt.p = e.grad_S();
    traj.samples.push_back(pt);
  }
  return traj;
}

Trajectory integrate_bohm(const WaveFunction& state, const PotentialSpec& potential,
                          const Vec& q0, const Vec& p0, double t0, double t1,
                          const IntegratorConfig& cfg, double mass,
                          const std::vector<double>& sample_times) {
  cfg.validate();
  if (cfg.include_quantum) {
    const PsiEval e0 = state.eval(q0, t0);
    if (!(e0.cancellation() >= cfg.node_epsilon))
      throw NodeProximityError(q0, t0, e0.cancellation());
  }
  const int d = state.dimension();
  Trajectory traj;
  traj.law = Law::bohm;

  QForceOptions qopts;
  qopts.fd_step = cfg.fd_step;
  qopts.node_epsilon = cfg.node_epsilon;

  auto rhs = [&](double t, const Vec& y, Vec& dy) {
    Vec q(d);
    for (int i = 0; i < d; ++i) q[i] = y[i];
    Vec force = -1.0 * potential.gradient(q);
    if (cfg.include_quantum) {
      try {
        force += quantum_force(state, q, t, mass, qopts);
      } catch (const NodeProximityError&) {
        return false;
      }
    }
    for (int i = 0; i < d; ++i) {
      dy[i] = y[d + i] / mass;
      dy[d + i] = force[i];
    }
    return true;
  };
  auto record = [&](double t, const Vec& y) {
    PhasePoint pt;
    pt.q = Vec(d);
    pt.p = Vec(d);
    for (int i = 0; i < d; ++i) {
      pt.q[i] = y[i];
      pt.p[i] = y[d + i];
    }
    pt.t = t;
    traj.samples.push_back(pt);
  };
  auto escaped = [&](const Vec& y) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += y[i] * y[i];
    return r2 > cfg.escape_radius * cfg.escape_radius;
  };

  Vec y(2 * d);
  for (int i = 0; i < d; ++i) {
    y[i] = q0[i];
    y[d + i] = p0[i];
  }
  const DriveResult r = drive(rhs, y, t0, t1, cfg, sample_times, record, escaped);
  traj.termination = r.term;
  traj.termination_time = r.t_end;
  if (r.term != Termination::completed &&
      (traj.samples.empty() || traj.samples.back().t != r.t_end)) {
    record(r.t_end, y);
  }
  return traj;
}

double escape_velocity(double b, double x0) {
  if (!(b > 0.0) || !(x0 > 0.0))
    throw std::invalid_argument("escape_velocity: require b > 0 and x0 > 0");
  return std::sqrt(2.0 * b / x0);
}

}  // namespace pilotwave
