#include "pilotwave/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "pilotwave/numerics.hpp"

namespace pilotwave {

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::active: return "active";
    case PointStatus::escaped: return "escaped";
    case PointStatus::node_abort: return "node_abort";
    case PointStatus::step_floor: return "step_floor";
  }
  return "?";
}

namespace {

struct SupportBox {
  Vec lo, hi;
  double peak = 0.0;
};

int scan_resolution(int dim) {
  switch (dim) {
    case 1: return 4001;
    case 2: return 201;
    default: return 81;
  }
}

// Grid scan for the density peak and the box where density exceeds
// rel_threshold * peak.
SupportBox support_box(const WaveFunction& state, double t, double rel_threshold) {
  const int d = state.dimension();
  const double half = state.bulk_halfwidth();
  const int n = scan_resolution(d);
  const double step = 2.0 * half / (n - 1);

  std::vector<int> idx(d, 0);
  Vec q(d);
  double peak = 0.0;
  Vec peak_q(d);

  auto for_each_cell = [&](auto&& body) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (int i = 0; i < d; ++i) q[i] = -half + idx[i] * step;
      body();
      int i = 0;
      while (i < d && ++idx[i] == n) idx[i++] = 0;
      if (i == d) break;
    }
  };

  for_each_cell([&] {
    const double dens = state.eval(q, t).density();
    if (dens > peak) {
      peak = dens;
      peak_q = q;
    }
  });
  if (!(peak > 0.0)) throw EnvelopeError("support scan found zero density everywhere");

  // Local refinement of the peak: symmetric sub-grids, deep enough to climb
  // a Coulomb cusp to well under the envelope margin.
  double cell = step;
  for (int round = 0; round < 4; ++round) {
    const Vec base = peak_q;
    std::vector<int> ridx(d, 0);
    const int rn = 16;  // 17 points spanning base +/- cell
    while (true) {
      Vec qq(d);
      for (int i = 0; i < d; ++i) qq[i] = base[i] + (ridx[i] - rn / 2) * (cell / 8.0);
      const double dens = state.eval(qq, t).density();
      if (dens > peak) {
        peak = dens;
        peak_q = qq;
      }
      int i = 0;
      while (i < d && ++ridx[i] == rn + 1) ridx[i++] = 0;
      if (i == d) break;
    }
    cell /= 8.0;
  }

  SupportBox box;
  box.lo = Vec(d);
  box.hi = Vec(d);
  for (int i = 0; i < d; ++i) {
    box.lo[i] = half;
    box.hi[i] = -half;
  }
  const double thresh = rel_threshold * peak;
  for_each_cell([&] {
    if (state.eval(q, t).density() > thresh) {
      for (int i = 0; i < d; ++i) {
        box.lo[i] = std::min(box.lo[i], q[i]);
        box.hi[i] = std::max(box.hi[i], q[i]);
      }
    }
  });
  for (int i = 0; i < d; ++i) {
    box.lo[i] = std::max(box.lo[i] - step, -half);
    box.hi[i] = std::min(box.hi[i] + step, half);
  }
  box.peak = peak;
  return box;
}

void run_chunked(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Ensemble sample_quantum_equilibrium(const WaveFunction& state, std::size_t n,
                                    std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_quantum_equilibrium: n >= 1");
  const int d = state.dimension();
  const SupportBox box = support_box(state, 0.0, 1e-8);
  const double height = 1.05 * box.peak;
  constexpr std::size_t kMaxAttempts = 20'000'000;

  Ensemble ens;
  ens.points.resize(n);
  ens.status.assign(n, PointStatus::active);
  ens.t = 0.0;
  ens.seed = seed;

  std::size_t total_attempts = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_stream(seed, i));
    Vec q(d);
    std::size_t attempts = 0;
    while (true) {
      ++attempts;
      if (attempts > kMaxAttempts)
        throw EnvelopeError("rejection sampling exceeded the attempt budget");
      for (int j = 0; j < d; ++j) q[j] = rng.uniform(box.lo[j], box.hi[j]);
      const double v = rng.uniform(0.0, height);
      const PsiEval e = state.eval(q, 0.0);
      const double dens = e.density();
      if (dens > height)
        throw EnvelopeError("envelope violated: grid scan under-estimated the peak");
      if (v < dens && e.cancellation() >= kDefaultNodeEpsilon) {
        ens.points[i].q = q;
        ens.points[i].p = e.grad_S();
        ens.points[i].t = 0.0;
        break;
      }
    }
    total_attempts += attempts;
  }

  std::ostringstream prov;
  prov << "quantum_equilibrium n=" << n << " seed=" << seed
       << " envelope=uniform-box height=" << height
       << " acceptance=" << static_cast<double>(n) / static_cast<double>(total_attempts);
  ens.provenance = prov.str();
  return ens;
}

Ensemble sample_blob(const PhasePoint& center, double sigma_q, double sigma_p,
                     std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_blob: n >= 1");
  if (!(sigma_q >= 0.0) || !(sigma_p >= 0.0))
    throw std::invalid_argument("sample_blob: negative sigma");
  const int d = center.q.size();
  if (d < 1 || center.p.size() != d)
    throw std::invalid_argument("sample_blob: inconsistent center dimensions");

  Ensemble ens;
  ens.points.resize(n);
  ens.status.assign(n, PointStatus::active);
  ens.t = center.t;
  ens.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_stream(seed, i));
    PhasePoint pt;
    pt.q = Vec(d);
    pt.p = Vec(d);
    pt.t = center.t;
    for (int j = 0; j < d; ++j) pt.q[j] = center.q[j] + sigma_q * rng.normal();
    for (int j = 0; j < d; ++j) pt.p[j] = center.p[j] + sigma_p * rng.normal();
    ens.points[i] = pt;
  }
  std::ostringstream prov;
  prov << "blob n=" << n << " seed=" << seed << " sigma_q=" << sigma_q
       << " sigma_p=" << sigma_p;
  ens.provenance = prov.str();
  return ens;
}

PhasePoint on_shell_point(const WaveFunction& state, const Vec& q, double t) {
  PhasePoint pt;
  pt.q = q;
  pt.p = de_broglie_momentum(state, q, t);
  pt.t = t;
  return pt;
}

Ensemble evolve(const Ensemble& in, const WaveFunction& state,
                const PotentialSpec& potential, Law law, double t1,
                const IntegratorConfig& cfg, double mass, int threads) {
  cfg.validate();
  if (in.points.empty()) throw std::invalid_argument("evolve: empty ensemble");
  std::size_t active_in = 0;
  for (const auto s : in.status)
    if (s == PointStatus::active) ++active_in;
  if (active_in == 0)
    throw std::runtime_error("evolve: no evaluable points remain");
  Ensemble out = in;
  out.t = t1;

  const std::vector<double> landing = {t1};
  run_chunked(in.points.size(), threads, [&](std::size_t i) {
    if (in.status[i] != PointStatus::active) return;
    const PhasePoint& pt = in.points[i];
    Trajectory traj;
    try {
      if (law == Law::de_broglie) {
        traj = integrate_de_broglie(state, pt.q, pt.t, t1, cfg, mass, landing);
      } else {
        traj = integrate_bohm(state, potential, pt.q, pt.p, pt.t, t1, cfg, mass, landing);
      }
    } catch (const NodeProximityError&) {
      out.status[i] = PointStatus::node_abort;
      return;
    }
    out.points[i] = traj.samples.back();
    switch (traj.termination) {
      case Termination::completed: out.status[i] = PointStatus::active; break;
      case Termination::escaped: out.status[i] = PointStatus::escaped; break;
      case Termination::node_abort: out.status[i] = PointStatus::node_abort; break;
      case Termination::step_floor: out.status[i] = PointStatus::step_floor; break;
    }
  });

  return out;
}

MarginalCdf::MarginalCdf(const WaveFunction& state, double t, int axis) {
  const int d = state.dimension();
  if (axis < 0 || axis >= d) throw std::invalid_argument("MarginalCdf: bad axis");
  const SupportBox box = support_box(state, t, 1e-10);
  lo_ = box.lo[axis];
  hi_ = box.hi[axis];

  const int ngrid = (d == 1) ? 1025 : (d == 2 ? 513 : 257);
  grid_.resize(ngrid);
  for (int i = 0; i < ngrid; ++i)
    grid_[i] = lo_ + (hi_ - lo_) * i / (ngrid - 1);

  // Marginal density at the grid nodes.
  std::vector<double> dens(ngrid);
  if (d == 1) {
    for (int i = 0; i < ngrid; ++i) dens[i] = state.eval(Vec{grid_[i]}, t).density();
  } else if (d == 2) {
    const int other = 1 - axis;
    for (int i = 0; i < ngrid; ++i) {
      const double xi = grid_[i];
      dens[i] = integrate(
          [&](double y) {
            Vec q(2);
            q[axis] = xi;
            q[other] = y;
            return state.eval(q, t).density();
          },
          box.lo[other], box.hi[other], 16, 12);
    }
  } else {
    int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
    for (int i = 0; i < ngrid; ++i) {
      const double xi = grid_[i];
      dens[i] = integrate(
          [&](double y) {
            return integrate(
                [&](double z) {
                  Vec q(3);
                  q[axis] = xi;
                  q[o1] = y;
                  q[o2] = z;
                  return state.eval(q, t).density();
                },
                box.lo[o2], box.hi[o2], 12, 8);
          },
          box.lo[o1], box.hi[o1], 12, 8);
    }
  }

  // Trapezoid cumulative: monotone, and the grid is fine enough that the
  // quadrature error sits far below the KS resolution.
  cdf_.assign(ngrid, 0.0);
  const double h = (hi_ - lo_) / (ngrid - 1);
  for (int i = 1; i < ngrid; ++i)
    cdf_[i] = cdf_[i - 1] + 0.5 * h * (dens[i - 1] + dens[i]);
  // Normalize: the truncated tail mass is below the KS resolution.
  const double total = cdf_.back();
  if (!(total > 0.0)) throw std::runtime_error("MarginalCdf: zero total mass");
  for (double& c : cdf_) c /= total;
}

double MarginalCdf::operator()(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  const double x0 = grid_[i - 1], x1 = grid_[i];
  const double f = (x - x0) / (x1 - x0);
  return cdf_[i - 1] + f * (cdf_[i] - cdf_[i - 1]);
}

double ks_distance(std::vector<double> samples, const MarginalCdf& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    dmax = std::max(dmax, std::max((i + 1) / n - f, f - i / n));
  }
  return dmax;
}

EnsembleDiagnostics diagnostics(const Ensemble& ens, const WaveFunction& state,
                                double node_epsilon) {
  if (ens.points.empty()) throw std::invalid_argument("diagnostics: empty ensemble");
  const int d = state.dimension();
  EnsembleDiagnostics out;
  std::size_t escaped = 0, evaluable = 0;
  double dev2 = 0.0;
  std::vector<std::vector<double>> axis_samples(d);
  for (std::size_t i = 0; i < ens.points.size(); ++i) {
    if (ens.status[i] == PointStatus::escaped) {
      ++escaped;
      continue;
    }
    if (ens.status[i] != PointStatus::active) continue;
    const PhasePoint& pt = ens.points[i];
    const PsiEval e = state.eval(pt.q, ens.t);
    if (!(e.cancellation() >= node_epsilon)) continue;
    ++evaluable;
    const Vec gs = e.grad_S();
    double acc = 0.0;
    for (int j = 0; j < d; ++j) {
      const double dd = pt.p[j] - gs[j];
      acc += dd * dd;
    }
    dev2 += acc;
    for (int j = 0; j < d; ++j) axis_samples[j].push_back(pt.q[j]);
  }
  const double n = static_cast<double>(ens.points.size());
  out.escape_fraction = escaped / n;
  out.evaluable_fraction = evaluable / n;
  out.momentum_deviation = evaluable ? std::sqrt(dev2 / evaluable) : 0.0;
  out.position_ks = 0.0;
  if (evaluable) {
    for (int j = 0; j < d; ++j) {
      const MarginalCdf cdf(state, ens.t, j);
      out.position_ks = std::max(out.position_ks, ks_distance(axis_samples[j], cdf));
    }
  }
  return out;
}

double liouville_parcel_volume_change(const WaveFunction& state,
                                      const PotentialSpec& potential,
                                      const PhasePoint& center, double edge,
                                      double t1, const IntegratorConfig& cfg,
                                      double mass) {
  if (!(edge > 0.0)) throw std::invalid_argument("liouville: edge must be positive");
  const int d = center.q.size();
  const int D = 2 * d;
  const double h = 0.5 * edge;

  auto transport = [&](const Vec& z) {
    Vec q(d), p(d);
    for (int i = 0; i < d; ++i) {
      q[i] = z[i];
      p[i] = z[d + i];
    }
    const Trajectory traj = integrate_bohm(state, potential, q, p, center.t, t1, cfg,
                                           mass, {t1});
    if (traj.termination != Termination::completed)
      throw NodeProximityError(q, traj.termination_time, 0.0);
    Vec out(D);
    for (int i = 0; i < d; ++i) {
      out[i] = traj.samples.back().q[i];
      out[d + i] = traj.samples.back().p[i];
    }
    return out;
  };

  Vec z0(D);
  for (int i = 0; i < d; ++i) {
    z0[i] = center.q[i];
    z0[d + i] = center.p[i];
  }

  // Corners: node-coverage of the parcel interior (any abort fails the run).
  for (int corner = 0; corner < (1 << D); ++corner) {
    Vec z = z0;
    for (int i = 0; i < D; ++i) z[i] += ((corner >> i) & 1) ? h : -h;
    (void)transport(z);
  }

  // Jacobian columns from face midpoints.
  double jac[kMaxStateDim][kMaxStateDim] = {};
  for (int j = 0; j < D; ++j) {
    Vec zp = z0, zm = z0;
    zp[j] += h;
    zm[j] -= h;
    const Vec fp = transport(zp);
    const Vec fm = transport(zm);
    for (int i = 0; i < D; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }

  // |det| by Gaussian elimination with partial pivoting.
  double det = 1.0;
  for (int c = 0; c < D; ++c) {
    int piv = c;
    for (int r = c + 1; r < D; ++r)
      if (std::abs(jac[r][c]) > std::abs(jac[piv][c])) piv = r;
    if (piv != c) {
      for (int k = 0; k < D; ++k) std::swap(jac[c][k], jac[piv][k]);
      det = -det;
    }
    det *= jac[c][c];
    if (jac[c][c] == 0.0) break;
    for (int r = c + 1; r < D; ++r) {
      const double f = jac[r][c] / jac[c][c];
      for (int k = c; k < D; ++k) jac[r][k] -= f * jac[c][k];
    }
  }
  return std::abs(std::abs(det) - 1.0);
}

}  // namespace pilotwave
