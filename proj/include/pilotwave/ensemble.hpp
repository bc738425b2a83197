#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pilotwave/dynamics.hpp"
#include "pilotwave/quantum_state.hpp"

namespace pilotwave {

enum class PointStatus { active, escaped, node_abort, step_floor };

const char* to_string(PointStatus s);

// Equal-weight phase-space ensemble; all points share the same time.
struct Ensemble {
  std::vector<PhasePoint> points;
  std::vector<PointStatus> status;
  double t = 0.0;
  std::uint64_t seed = 0;
  std::string provenance;

  std::size_t size() const { return points.size(); }
  std::size_t active_count() const {
    std::size_t n = 0;
    for (const auto s : status)
      if (s == PointStatus::active) ++n;
    return n;
  }
};

struct EnsembleDiagnostics {
  double momentum_deviation = 0.0;  // RMS |p - grad S| over evaluable points
  double position_ks = 0.0;         // per-axis max KS distance vs |psi|^2 marginal
  double escape_fraction = 0.0;
  double evaluable_fraction = 0.0;
};

// 5% Kolmogorov-Smirnov critical value for sample size n.
inline double ks_critical_5pct(std::size_t n) {
  return 1.36 / std::sqrt(static_cast<double>(n));
}

class EnvelopeError : public std::runtime_error {
 public:
  explicit EnvelopeError(const std::string& what) : std::runtime_error(what) {}
};

// Positions drawn from |psi(.,0)|^2 by rejection against a uniform envelope
// over the support box (grid-scanned where density > 1e-8 of peak); momenta
// set exactly to grad S(q, 0). Each point uses its own RNG stream derived
// from (seed, index), so results are independent of threading.
Ensemble sample_quantum_equilibrium(const WaveFunction& state, std::size_t n,
                                    std::uint64_t seed);

// Isotropic Gaussian in (q, p) about a phase-space point.
Ensemble sample_blob(const PhasePoint& center, double sigma_q, double sigma_p,
                     std::size_t n, std::uint64_t seed);

// Phase point on the surface p = grad S(q, t).
PhasePoint on_shell_point(const WaveFunction& state, const Vec& q, double t = 0.0);

// Integrate every active point independently to t1. Escaped and aborted
// points are retained with flags.
Ensemble evolve(const Ensemble& in, const WaveFunction& state,
                const PotentialSpec& potential, Law law, double t1,
                const IntegratorConfig& cfg, double mass = 1.0, int threads = 1);

EnsembleDiagnostics diagnostics(const Ensemble& ens, const WaveFunction& state,
                                double node_epsilon = kDefaultNodeEpsilon);

// Marginal CDF of |psi(.,t)|^2 along one axis (quadrature-backed); used by
// the KS statistic and exposed for tests.
class MarginalCdf {
 public:
  MarginalCdf(const WaveFunction& state, double t, int axis);
  double operator()(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

// KS distance between sorted sample values and a reference CDF.
double ks_distance(std::vector<double> samples, const MarginalCdf& cdf);

// Transports the corners and face midpoints of a phase-space hypercube of
// the given edge under the Bohm flow and returns | |det J| - 1 | with J the
// linearized deformation from the face midpoints. Under Liouville's theorem
// this tends to 0 as edge and tolerances shrink.
double liouville_parcel_volume_change(const WaveFunction& state,
                                      const PotentialSpec& potential,
                                      const PhasePoint& center, double edge,
                                      double t1, const IntegratorConfig& cfg,
                                      double mass = 1.0);

}  // namespace pilotwave
