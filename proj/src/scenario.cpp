#include "pilotwave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pilotwave/numerics.hpp"

namespace pilotwave {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> split_doubles(const std::string& s, int line) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("expected a number, got '" + tok + "'", line);
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigError::ConfigError(const std::string& msg, int l)
    : std::runtime_error(l > 0 ? msg + " (line " + std::to_string(l) + ")" : msg),
      line(l) {}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
  ConfigFile f;
  f.origin_ = origin;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("unterminated section header", lineno);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", lineno);
      f.sections_[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", lineno);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (section.empty()) throw ConfigError("key outside any [section]", lineno);
    f.sections_[section].emplace(key, Entry{value, lineno});
  }
  return f;
}

bool ConfigFile::has(const std::string& s, const std::string& k) const {
  const auto it = sections_.find(s);
  return it != sections_.end() && it->second.count(k) > 0;
}

std::optional<std::string> ConfigFile::get(const std::string& s,
                                           const std::string& k) const {
  const auto it = sections_.find(s);
  if (it == sections_.end()) return std::nullopt;
  const auto jt = it->second.find(k);
  if (jt == it->second.end()) return std::nullopt;
  if (it->second.count(k) > 1)
    throw ConfigError("key '" + k + "' in [" + s + "] given more than once",
                      jt->second.line);
  return jt->second.value;
}

std::vector<std::string> ConfigFile::get_all(const std::string& s,
                                             const std::string& k) const {
  std::vector<std::string> out;
  const auto it = sections_.find(s);
  if (it == sections_.end()) return out;
  const auto range = it->second.equal_range(k);
  for (auto jt = range.first; jt != range.second; ++jt) out.push_back(jt->second.value);
  return out;
}

std::string ConfigFile::get_string(const std::string& s, const std::string& k,
                                   const std::string& fb) const {
  const auto v = get(s, k);
  return v ? *v : fb;
}

double ConfigFile::get_double(const std::string& s, const std::string& k,
                              double fb) const {
  const auto v = get(s, k);
  if (!v) return fb;
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + s + "." + k + ": '" + *v + "'");
  }
}

int ConfigFile::get_int(const std::string& s, const std::string& k, int fb) const {
  const auto v = get(s, k);
  if (!v) return fb;
  try {
    return std::stoi(*v);
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + s + "." + k + ": '" + *v + "'");
  }
}

std::uint64_t ConfigFile::get_u64(const std::string& s, const std::string& k,
                                  std::uint64_t fb) const {
  const auto v = get(s, k);
  if (!v) return fb;
  try {
    return std::stoull(*v);
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + s + "." + k + ": '" + *v + "'");
  }
}

bool ConfigFile::get_bool(const std::string& s, const std::string& k, bool fb) const {
  const auto v = get(s, k);
  if (!v) return fb;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("bad boolean for " + s + "." + k + ": '" + *v + "'");
}

// ---------------------------------------------------------------------------
// Formatting / CSV

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const WaveFunction& state, double mass) {
  std::ofstream out = open_out(path);
  const int d = state.dimension();
  out << "t";
  for (int i = 0; i < d; ++i) out << ",q" << (i + 1);
  for (int i = 0; i < d; ++i) out << ",p" << (i + 1);
  out << ",density,Q\n";
  for (const PhasePoint& pt : traj.samples) {
    out << fmt_double(pt.t);
    for (int i = 0; i < d; ++i) out << ',' << fmt_double(pt.q[i]);
    for (int i = 0; i < d; ++i) out << ',' << fmt_double(pt.p[i]);
    const PsiEval e = state.eval(pt.q, pt.t);
    out << ',' << fmt_double(e.density());
    double qv = std::numeric_limits<double>::quiet_NaN();
    if (e.cancellation() >= kDefaultNodeEpsilon)
      qv = quantum_potential(state, pt.q, pt.t, mass);
    out << ',' << fmt_double(qv) << '\n';
  }
  out << "# termination=" << to_string(traj.termination)
      << " time=" << fmt_double(traj.termination_time) << '\n';
}

void write_ensemble_csv(const std::string& path, const Ensemble& ens,
                        const std::string& axis_suffix) {
  std::ofstream out = open_out(path);
  if (ens.points.empty()) throw std::invalid_argument("empty ensemble");
  const int d = ens.points.front().q.size();
  out << "id,t";
  for (int i = 0; i < d; ++i) out << ",q" << axis_suffix << (i + 1);
  for (int i = 0; i < d; ++i) out << ",p" << axis_suffix << (i + 1);
  out << ",flag\n";
  for (std::size_t i = 0; i < ens.points.size(); ++i) {
    const PhasePoint& pt = ens.points[i];
    out << i << ',' << fmt_double(pt.t);
    for (int j = 0; j < d; ++j) out << ',' << fmt_double(pt.q[j]);
    for (int j = 0; j < d; ++j) out << ',' << fmt_double(pt.p[j]);
    out << ',' << to_string(ens.status[i]) << '\n';
  }
  out << "# " << ens.provenance << '\n';
}

void write_diagnostics_csv(const std::string& path, const std::vector<double>& times,
                           const std::vector<EnsembleDiagnostics>& diags) {
  std::ofstream out = open_out(path);
  out << "t,momentum_deviation,position_ks,escape_fraction,evaluable_fraction\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << fmt_double(times[i]) << ',' << fmt_double(diags[i].momentum_deviation)
        << ',' << fmt_double(diags[i].position_ks) << ','
        << fmt_double(diags[i].escape_fraction) << ','
        << fmt_double(diags[i].evaluable_fraction) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Presets

namespace {

std::shared_ptr<const WaveFunction> three_state_oscillator(double th1, double th2) {
  using T = OscillatorSuperposition::Term;
  return std::make_shared<OscillatorSuperposition>(OscillatorSuperposition::normalized(
      std::vector<T>{{0, 1.0, 0.0}, {1, 1.0, th1}, {2, 1.0, th2}}));
}

std::shared_ptr<const WaveFunction> hydrogen_three_state() {
  using T = HydrogenSuperposition::Term;
  return std::make_shared<HydrogenSuperposition>(HydrogenSuperposition::normalized(
      std::vector<T>{{1, 0, 0, Complex(1.0, 0.0)},
                     {2, 1, 1, std::exp(Complex(0.0, 1.0))},
                     {3, 2, -1, std::exp(Complex(0.0, 2.0))}}));
}

std::shared_ptr<const Oscillator2D> mode_state(double mass, double omega, double th1,
                                               double th2) {
  using T = Oscillator2D::Term;
  return std::make_shared<Oscillator2D>(Oscillator2D::normalized(
      mass, omega,
      std::vector<T>{{0, 0, 1.0, 0.0}, {1, 0, 1.0, th1}, {2, 0, 1.0, th2}}));
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "bound-footnote", "liouville",
          "liouville-classical", "field-mode"};
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.integrator.rel_tol = 1e-9;
  cfg.integrator.abs_tol = 1e-9;
  if (name == "fig1") {
    cfg.kind = "asymptotic-bound";
    cfg.state = three_state_oscillator(1.1, 1.8);
    cfg.bound = BoundCheckConfig{};  // x in (3,10) x t in (0,2pi), b_check 2
  } else if (name == "bound-footnote") {
    cfg.kind = "asymptotic-bound";
    cfg.state = three_state_oscillator(1.1, 1.8);
    cfg.bound.x_min = 10.0;
    cfg.bound.x_max = 1000.0;
    cfg.bound.nx = 60;
    cfg.bound.log_x = true;
    cfg.bound.nt = 32;
  } else if (name == "fig2" || name == "fig3") {
    cfg.kind = "ensemble";
    cfg.state = three_state_oscillator(2.0, 4.0);
    cfg.law = Law::bohm;
    cfg.sampler = "blob";
    cfg.n_points = 2000;
    cfg.blob_center_q = 2.5;
    cfg.blob_p_offset = (name == "fig3") ? 0.5 : 0.0;
    cfg.t1 = 5.0;
    cfg.checkpoints = 5;
    cfg.integrator.rel_tol = 1e-8;
    cfg.integrator.abs_tol = 1e-8;
  } else if (name == "fig4") {
    cfg.kind = "trajectory";
    cfg.state = hydrogen_three_state();
    cfg.q0 = Vec{0.5, 0.5, 0.5};
    cfg.p0_on_shell = true;
    cfg.t1 = 30.0;
    cfg.n_samples = 400;
    cfg.integrator.escape_radius = 50.0;
  } else if (name == "liouville" || name == "liouville-classical") {
    cfg.kind = "liouville";
    cfg.state = three_state_oscillator(1.1, 1.8);
    cfg.parcel_edge = 1e-3;
    cfg.parcel_center_q = 0.2;
    cfg.t1 = 1.0;
    cfg.integrator.rel_tol = 1e-10;
    cfg.integrator.abs_tol = 1e-10;
    if (name == "liouville-classical") {
      cfg.classical_control = true;
      cfg.t1 = kTwoPi;
    }
  } else if (name == "field-mode") {
    cfg.kind = "field-mode";
    cfg.mode = FieldModeSpec{3.0, 2.0};  // k = 3, a = 2
    const MappedOscillator m = mode_to_oscillator(cfg.mode);
    cfg.state = mode_state(m.mass, m.omega, 2.0, 4.0);
    cfg.mode_run.integrator.rel_tol = 1e-8;
    cfg.mode_run.integrator.abs_tol = 1e-8;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Config application

namespace {

std::shared_ptr<const WaveFunction> build_state(const ConfigFile& f) {
  const std::string kind = f.get_string("state", "kind", "oscillator");
  const bool normalize = f.get_bool("state", "normalize", true);
  if (kind == "oscillator") {
    std::vector<OscillatorSuperposition::Term> terms;
    for (const std::string& s : f.get_all("state", "term")) {
      const std::vector<double> v = split_doubles(s, 0);
      if (v.size() != 3)
        throw ConfigError("oscillator term needs 'level modulus phase': " + s);
      terms.push_back({static_cast<int>(v[0]), v[1], v[2]});
    }
    if (terms.empty()) throw ConfigError("[state] has no term entries");
    return std::make_shared<OscillatorSuperposition>(
        normalize ? OscillatorSuperposition::normalized(std::move(terms))
                  : OscillatorSuperposition(std::move(terms)));
  }
  if (kind == "oscillator2d") {
    const double mass = f.get_double("state", "mass", 1.0);
    const double omega = f.get_double("state", "omega", 1.0);
    std::vector<Oscillator2D::Term> terms;
    for (const std::string& s : f.get_all("state", "term")) {
      const std::vector<double> v = split_doubles(s, 0);
      if (v.size() != 4)
        throw ConfigError("oscillator2d term needs 'l1 l2 modulus phase': " + s);
      terms.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), v[2], v[3]});
    }
    if (terms.empty()) throw ConfigError("[state] has no term entries");
    return std::make_shared<Oscillator2D>(
        normalize ? Oscillator2D::normalized(mass, omega, std::move(terms))
                  : Oscillator2D(mass, omega, std::move(terms)));
  }
  if (kind == "hydrogen") {
    std::vector<HydrogenSuperposition::Term> terms;
    for (const std::string& s : f.get_all("state", "term")) {
      const std::vector<double> v = split_doubles(s, 0);
      if (v.size() != 5)
        throw ConfigError("hydrogen term needs 'n l m modulus phase': " + s);
      terms.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]),
                       static_cast<int>(v[2]),
                       std::polar(v[3], v[4])});
    }
    if (terms.empty()) throw ConfigError("[state] has no term entries");
    return std::make_shared<HydrogenSuperposition>(
        normalize ? HydrogenSuperposition::normalized(std::move(terms))
                  : HydrogenSuperposition(std::move(terms)));
  }
  throw ConfigError("unknown state kind '" + kind + "'");
}

Vec parse_vec(const ConfigFile& f, const std::string& sec, const std::string& key,
              const Vec& fallback) {
  const auto v = f.get(sec, key);
  if (!v) return fallback;
  const std::vector<double> xs = split_doubles(*v, 0);
  if (xs.empty() || xs.size() > 3) throw ConfigError(sec + "." + key + ": need 1-3 numbers");
  Vec out(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) out[static_cast<int>(i)] = xs[i];
  return out;
}

}  // namespace

void apply_config(ScenarioConfig& cfg, const ConfigFile& f) {
  if (f.has("state", "term") || f.has("state", "kind")) cfg.state = build_state(f);

  cfg.law = f.get_string("run", "law",
                         cfg.law == Law::bohm ? "bohm" : "de_broglie") == "bohm"
                ? Law::bohm
                : Law::de_broglie;
  cfg.seed = f.get_u64("run", "seed", cfg.seed);
  cfg.threads = f.get_int("run", "threads", cfg.threads);
  cfg.out_dir = f.get_string("output", "dir", cfg.out_dir);
  cfg.mass = f.get_double("run", "mass", cfg.mass);

  IntegratorConfig& ic = cfg.integrator;
  ic.rel_tol = f.get_double("integrator", "rel_tol", ic.rel_tol);
  ic.abs_tol = f.get_double("integrator", "abs_tol", ic.abs_tol);
  ic.max_step = f.get_double("integrator", "max_step", ic.max_step);
  ic.min_step = f.get_double("integrator", "min_step", ic.min_step);
  ic.escape_radius = f.get_double("integrator", "escape_radius", ic.escape_radius);
  ic.node_epsilon = f.get_double("integrator", "node_epsilon", ic.node_epsilon);
  ic.fd_step = f.get_double("integrator", "fd_step", ic.fd_step);
  ic.include_quantum = f.get_bool("integrator", "include_quantum", ic.include_quantum);

  cfg.q0 = parse_vec(f, "trajectory", "q0", cfg.q0);
  cfg.p0 = parse_vec(f, "trajectory", "p0", cfg.p0);
  if (f.has("trajectory", "p0")) cfg.p0_on_shell = false;
  cfg.p0_on_shell = f.get_bool("trajectory", "p0_on_shell", cfg.p0_on_shell);
  cfg.p0_offset = parse_vec(f, "trajectory", "p0_offset", cfg.p0_offset);
  cfg.t0 = f.get_double("trajectory", "t0", cfg.t0);
  cfg.t1 = f.get_double("trajectory", "t1", cfg.t1);
  cfg.n_samples = f.get_int("trajectory", "samples", cfg.n_samples);

  cfg.sampler = f.get_string("ensemble", "sampler", cfg.sampler);
  cfg.n_points = static_cast<std::size_t>(
      f.get_u64("ensemble", "n", cfg.n_points));
  cfg.blob_center_q = f.get_double("ensemble", "center_q", cfg.blob_center_q);
  cfg.blob_p_offset = f.get_double("ensemble", "p_offset", cfg.blob_p_offset);
  cfg.blob_sigma_q = f.get_double("ensemble", "sigma_q", cfg.blob_sigma_q);
  cfg.blob_sigma_p = f.get_double("ensemble", "sigma_p", cfg.blob_sigma_p);
  cfg.checkpoints = f.get_int("ensemble", "checkpoints", cfg.checkpoints);
  cfg.t1 = f.get_double("ensemble", "t1", cfg.t1);

  BoundCheckConfig& b = cfg.bound;
  b.x_min = f.get_double("bound", "x_min", b.x_min);
  b.x_max = f.get_double("bound", "x_max", b.x_max);
  b.nx = f.get_int("bound", "nx", b.nx);
  b.log_x = f.get_bool("bound", "log_x", b.log_x);
  b.t_min = f.get_double("bound", "t_min", b.t_min);
  b.t_max = f.get_double("bound", "t_max", b.t_max);
  b.nt = f.get_int("bound", "nt", b.nt);
  b.b_check = f.get_double("bound", "b_check", b.b_check);
  b.asym_rel_tol = f.get_double("bound", "tol", b.asym_rel_tol);

  cfg.parcel_edge = f.get_double("liouville", "edge", cfg.parcel_edge);
  cfg.parcel_center_q = f.get_double("liouville", "center_q", cfg.parcel_center_q);
  cfg.classical_control = f.get_bool("liouville", "classical", cfg.classical_control);
  if (f.has("liouville", "t1")) cfg.t1 = f.get_double("liouville", "t1", cfg.t1);

  if (f.has("mode", "a") || f.has("mode", "k")) {
    cfg.mode.a = f.get_double("mode", "a", cfg.mode.a);
    cfg.mode.k = f.get_double("mode", "k", cfg.mode.k);
  }
  ModeRunConfig& mr = cfg.mode_run;
  mr.center_xi1 = f.get_double("mode", "center_xi", mr.center_xi1);
  mr.p_offset_xi = f.get_double("mode", "p_offset_xi", mr.p_offset_xi);
  mr.sigma_xi = f.get_double("mode", "sigma_xi", mr.sigma_xi);
  mr.n = static_cast<std::size_t>(f.get_u64("mode", "n", mr.n));
  mr.t1_periods = f.get_double("mode", "periods", mr.t1_periods);
  mr.checkpoints = f.get_int("mode", "checkpoints", mr.checkpoints);
}

// ---------------------------------------------------------------------------
// Resolved-config serialization

namespace {

void describe_state(std::ostream& os, const WaveFunction& state) {
  if (const auto* osc = dynamic_cast<const OscillatorSuperposition*>(&state)) {
    os << "[state]\nkind = oscillator\n";
    for (const auto& t : osc->terms())
      os << "term = " << t.level << ' ' << fmt_double(t.modulus) << ' '
         << fmt_double(t.phase) << '\n';
    return;
  }
  if (const auto* o2 = dynamic_cast<const Oscillator2D*>(&state)) {
    os << "[state]\nkind = oscillator2d\nmass = " << fmt_double(o2->mass())
       << "\nomega = " << fmt_double(o2->omega()) << '\n';
    for (const auto& t : o2->terms())
      os << "term = " << t.level1 << ' ' << t.level2 << ' ' << fmt_double(t.modulus)
         << ' ' << fmt_double(t.phase) << '\n';
    return;
  }
  if (const auto* hy = dynamic_cast<const HydrogenSuperposition*>(&state)) {
    os << "[state]\nkind = hydrogen\n";
    for (const auto& t : hy->terms())
      os << "term = " << t.n << ' ' << t.l << ' ' << t.m << ' '
         << fmt_double(std::abs(t.coeff)) << ' ' << fmt_double(std::arg(t.coeff))
         << '\n';
    return;
  }
  os << "[state]\nkind = unknown\n";
}

}  // namespace

std::string ScenarioConfig::resolved_text() const {
  std::ostringstream os;
  os << "# pilotwave " << kVersion << " resolved configuration\n";
  os << "[run]\nname = " << name << "\nkind = " << kind
     << "\nlaw = " << to_string(law) << "\nseed = " << seed
     << "\nthreads = " << threads << "\nmass = " << fmt_double(mass) << '\n';
  if (state) describe_state(os, *state);
  os << "[integrator]\nrel_tol = " << fmt_double(integrator.rel_tol)
     << "\nabs_tol = " << fmt_double(integrator.abs_tol)
     << "\nmax_step = " << fmt_double(integrator.max_step)
     << "\nmin_step = " << fmt_double(integrator.min_step)
     << "\nescape_radius = " << fmt_double(integrator.escape_radius)
     << "\nnode_epsilon = " << fmt_double(integrator.node_epsilon)
     << "\nfd_step = " << fmt_double(integrator.fd_step)
     << "\ninclude_quantum = " << (integrator.include_quantum ? "true" : "false")
     << '\n';
  if (kind == "trajectory") {
    os << "[trajectory]\nq0 =";
    for (int i = 0; i < q0.size(); ++i) os << ' ' << fmt_double(q0[i]);
    os << "\np0_on_shell = " << (p0_on_shell ? "true" : "false");
    if (!p0_on_shell) {
      os << "\np0 =";
      for (int i = 0; i < p0.size(); ++i) os << ' ' << fmt_double(p0[i]);
    }
    if (p0_offset.size() > 0) {
      os << "\np0_offset =";
      for (int i = 0; i < p0_offset.size(); ++i) os << ' ' << fmt_double(p0_offset[i]);
    }
    os << "\nt0 = " << fmt_double(t0) << "\nt1 = " << fmt_double(t1)
       << "\nsamples = " << n_samples << '\n';
  } else if (kind == "ensemble") {
    os << "[ensemble]\nsampler = " << sampler << "\nn = " << n_points
       << "\ncenter_q = " << fmt_double(blob_center_q)
       << "\np_offset = " << fmt_double(blob_p_offset)
       << "\nsigma_q = " << fmt_double(blob_sigma_q)
       << "\nsigma_p = " << fmt_double(blob_sigma_p) << "\nt1 = " << fmt_double(t1)
       << "\ncheckpoints = " << checkpoints << '\n';
  } else if (kind == "asymptotic-bound") {
    os << "[bound]\nx_min = " << fmt_double(bound.x_min)
       << "\nx_max = " << fmt_double(bound.x_max) << "\nnx = " << bound.nx
       << "\nlog_x = " << (bound.log_x ? "true" : "false")
       << "\nt_min = " << fmt_double(bound.t_min)
       << "\nt_max = " << fmt_double(bound.t_max) << "\nnt = " << bound.nt
       << "\nb_check = " << fmt_double(bound.b_check)
       << "\ntol = " << fmt_double(bound.asym_rel_tol) << '\n';
  } else if (kind == "liouville") {
    os << "[liouville]\nedge = " << fmt_double(parcel_edge)
       << "\ncenter_q = " << fmt_double(parcel_center_q)
       << "\nclassical = " << (classical_control ? "true" : "false")
       << "\nt1 = " << fmt_double(t1) << '\n';
  } else if (kind == "field-mode") {
    os << "[mode]\na = " << fmt_double(mode.a) << "\nk = " << fmt_double(mode.k)
       << "\ncenter_xi = " << fmt_double(mode_run.center_xi1)
       << "\np_offset_xi = " << fmt_double(mode_run.p_offset_xi)
       << "\nsigma_xi = " << fmt_double(mode_run.sigma_xi) << "\nn = " << mode_run.n
       << "\nperiods = " << fmt_double(mode_run.t1_periods)
       << "\ncheckpoints = " << mode_run.checkpoints << '\n';
  }
  os << "[output]\ndir = " << out_dir << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Execution

namespace {

void write_manifest(const ScenarioConfig& cfg, const RunResult& res) {
  namespace fs = std::filesystem;
  const std::string resolved = cfg.resolved_text();
  {
    std::ofstream out = open_out((fs::path(cfg.out_dir) / "config_resolved.ini").string());
    out << resolved;
  }
  std::ofstream out = open_out((fs::path(cfg.out_dir) / "manifest.txt").string());
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(resolved.data(), resolved.size())));
  out << "tool = pilotwave " << kVersion << '\n';
  out << "scenario = " << cfg.name << '\n';
  out << "kind = " << cfg.kind << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "threads = " << cfg.threads << '\n';
  out << "config_fnv1a64 = " << hash << '\n';
  for (const CriterionResult& c : res.criteria)
    out << "criterion " << c.name << " = " << (c.pass ? "PASS" : "FAIL") << " ("
        << c.detail << ")\n";
  for (const std::string& a : res.artifacts) out << "artifact = " << a << '\n';
  out << "exit_code = " << res.exit_code << '\n';
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

Vec resize_to(const Vec& v, int d, double fill = 0.0) {
  Vec out(d, fill);
  for (int i = 0; i < std::min(d, v.size()); ++i) out[i] = v[i];
  return out;
}

void run_trajectory(const ScenarioConfig& cfg, RunResult& res) {
  namespace fs = std::filesystem;
  const WaveFunction& state = *cfg.state;
  const int d = state.dimension();
  const PotentialSpec pot = state.natural_potential();
  const Vec q0 = resize_to(cfg.q0, d);
  const std::vector<double> times = linspace(cfg.t0, cfg.t1, cfg.n_samples + 1);

  auto save = [&](const std::string& stem, const Trajectory& tr) {
    const std::string path = (fs::path(cfg.out_dir) / (stem + ".csv")).string();
    write_trajectory_csv(path, tr, state, cfg.mass);
    res.artifacts.push_back(stem + ".csv");
    if (tr.termination == Termination::node_abort ||
        tr.termination == Termination::step_floor)
      res.exit_code = 3;
  };

  if (cfg.name == "fig4") {
    const Vec p_deb = de_broglie_momentum(state, q0, cfg.t0);
    const Trajectory ref =
        integrate_de_broglie(state, q0, cfg.t0, cfg.t1, cfg.integrator, cfg.mass, times);
    save("fig4_de_broglie", ref);
    const std::vector<std::pair<std::string, Vec>> offsets = {
        {"fig4_bohm_on_shell", Vec{0.0, 0.0, 0.0}},
        {"fig4_bohm_small", Vec{-0.01, 0.01, 0.02}},
        {"fig4_bohm_medium", Vec{0.05, 0.05, 0.05}},
        {"fig4_bohm_large", Vec{0.1, 0.1, 0.1}},
    };
    for (const auto& [stem, off] : offsets) {
      Vec p0 = p_deb;
      for (int i = 0; i < d; ++i) p0[i] += off[i];
      save(stem, integrate_bohm(state, pot, q0, p0, cfg.t0, cfg.t1, cfg.integrator,
                                cfg.mass, times));
    }
    return;
  }

  if (cfg.law == Law::de_broglie) {
    save("trajectory",
         integrate_de_broglie(state, q0, cfg.t0, cfg.t1, cfg.integrator, cfg.mass, times));
  } else {
    Vec p0 = cfg.p0_on_shell ? de_broglie_momentum(state, q0, cfg.t0)
                             : resize_to(cfg.p0, d);
    for (int i = 0; i < std::min(d, cfg.p0_offset.size()); ++i) p0[i] += cfg.p0_offset[i];
    save("trajectory", integrate_bohm(state, pot, q0, p0, cfg.t0, cfg.t1,
                                      cfg.integrator, cfg.mass, times));
  }
}

void run_ensemble(const ScenarioConfig& cfg, RunResult& res) {
  namespace fs = std::filesystem;
  const WaveFunction& state = *cfg.state;
  const PotentialSpec pot = state.natural_potential();

  Ensemble ens;
  if (cfg.sampler == "equilibrium") {
    ens = sample_quantum_equilibrium(state, cfg.n_points, cfg.seed);
  } else if (cfg.sampler == "blob") {
    Vec qc(state.dimension());
    qc[0] = cfg.blob_center_q;
    PhasePoint center = on_shell_point(state, qc, 0.0);
    center.p[0] += cfg.blob_p_offset;
    ens = sample_blob(center, cfg.blob_sigma_q, cfg.blob_sigma_p, cfg.n_points, cfg.seed);
  } else {
    throw ConfigError("unknown sampler '" + cfg.sampler + "'");
  }

  std::vector<double> times = {0.0};
  std::vector<EnsembleDiagnostics> diags = {
      diagnostics(ens, state, cfg.integrator.node_epsilon)};
  write_ensemble_csv((fs::path(cfg.out_dir) / "ensemble_t0.csv").string(), ens);
  res.artifacts.push_back("ensemble_t0.csv");

  for (int c = 1; c <= cfg.checkpoints; ++c) {
    const double tc = cfg.t1 * c / cfg.checkpoints;
    if (ens.active_count() > 0) {
      ens = evolve(ens, state, pot, cfg.law, tc, cfg.integrator, cfg.mass, cfg.threads);
    } else {
      ens.t = tc;
    }
    times.push_back(tc);
    diags.push_back(diagnostics(ens, state, cfg.integrator.node_epsilon));
  }
  write_ensemble_csv((fs::path(cfg.out_dir) / "ensemble_final.csv").string(), ens);
  res.artifacts.push_back("ensemble_final.csv");
  write_diagnostics_csv((fs::path(cfg.out_dir) / "diagnostics.csv").string(), times, diags);
  res.artifacts.push_back("diagnostics.csv");

  if (cfg.name == "fig2" || cfg.name == "fig3") {
    const double d0 = diags.front().momentum_deviation;
    const double d1 = diags.back().momentum_deviation;
    CriterionResult cr;
    cr.name = cfg.name + "_momentum_deviation_" +
              (cfg.name == "fig2" ? "decreases" : "increases");
    cr.pass = (cfg.name == "fig2") ? d1 < d0 : d1 > d0;
    cr.detail = "md(0)=" + fmt_double(d0) + " md(t1)=" + fmt_double(d1);
    res.criteria.push_back(cr);
  }
}

void run_bound(const ScenarioConfig& cfg, RunResult& res) {
  namespace fs = std::filesystem;
  const auto* osc = dynamic_cast<const OscillatorSuperposition*>(cfg.state.get());
  if (osc == nullptr)
    throw ConfigError("asymptotic-bound requires a 1-D oscillator state");
  const std::string grid_path = (fs::path(cfg.out_dir) / "bound_grid.csv").string();
  std::ofstream grid = open_out(grid_path);
  grid << "x,t,a,a_plus_b_over_x2\n";
  const BoundReport rep = verify_bound(*osc, cfg.bound,
                                       [&](double x, double t, double a, double s) {
                                         grid << fmt_double(x) << ',' << fmt_double(t)
                                              << ',' << fmt_double(a) << ','
                                              << fmt_double(s) << '\n';
                                       });
  res.artifacts.push_back("bound_grid.csv");

  CriterionResult cr;
  cr.name = "grid_lower_bound";
  cr.pass = rep.grid_pass;
  cr.detail = "min(a+b/x^2)=" + fmt_double(rep.grid_min_shifted) + " at x=" +
              fmt_double(rep.argmin_x) + ",t=" + fmt_double(rep.argmin_t) +
              " nodes_excluded=" + std::to_string(rep.nodes_excluded);
  res.criteria.push_back(cr);

  // The 1/x correction swamps the asymptotic form below x ~ 100; only gate
  // on it when the grid actually reaches the asymptotic regime.
  const AsymptoticBound ab = asymptotic_bound(*osc);
  if (!ab.degenerate && cfg.bound.x_max >= 100.0) {
    CriterionResult ca;
    ca.name = "asymptotic_formula";
    ca.pass = rep.asym_pass;
    ca.detail = "residual(x_max)=" + fmt_double(rep.asym_residual) +
                " residual(x_max/10)=" + fmt_double(rep.asym_residual_inner) +
                " b=" + fmt_double(ab.b);
    res.criteria.push_back(ca);
  }
}

void run_liouville(const ScenarioConfig& cfg, RunResult& res) {
  const WaveFunction& state = *cfg.state;
  IntegratorConfig ic = cfg.integrator;
  ic.include_quantum = !cfg.classical_control;
  PhasePoint center;
  if (cfg.classical_control) {
    center.q = Vec{1.0};
    center.p = Vec{0.0};
    center.t = 0.0;
  } else {
    Vec qc(state.dimension());
    qc[0] = cfg.parcel_center_q;
    center = on_shell_point(state, qc, 0.0);
  }
  const double change = liouville_parcel_volume_change(
      state, state.natural_potential(), center, cfg.parcel_edge, cfg.t1, ic, cfg.mass);
  CriterionResult cr;
  cr.name = cfg.classical_control ? "liouville_classical" : "liouville_quantum";
  const double thresh = cfg.classical_control ? 1e-6 : 1e-2;
  cr.pass = change < thresh;
  cr.detail = "volume_change=" + fmt_double(change) + " threshold=" + fmt_double(thresh);
  res.criteria.push_back(cr);
}

void run_field_mode(const ScenarioConfig& cfg, RunResult& res) {
  namespace fs = std::filesystem;
  const auto* st = dynamic_cast<const Oscillator2D*>(cfg.state.get());
  if (st == nullptr) throw ConfigError("field-mode requires an oscillator2d state");
  ModeRunConfig mr = cfg.mode_run;
  mr.seed = cfg.seed;
  mr.threads = cfg.threads;
  const ModeRunResult r = mode_instability_run(cfg.mode, *st, mr);
  write_diagnostics_csv((fs::path(cfg.out_dir) / "mode_diagnostics.csv").string(),
                        r.times, r.diagnostics);
  res.artifacts.push_back("mode_diagnostics.csv");
  write_ensemble_csv((fs::path(cfg.out_dir) / "mode_final.csv").string(),
                     r.final_ensemble, "_k");
  res.artifacts.push_back("mode_final.csv");

  CriterionResult cr;
  if (mr.p_offset_xi == 0.0) {
    cr.name = "mode_on_shell_momentum_deviation_non_increasing";
    cr.pass = r.diagnostics.back().momentum_deviation <=
              r.diagnostics.front().momentum_deviation;
    cr.detail = "md(0)=" + fmt_double(r.diagnostics.front().momentum_deviation) +
                " md(t1)=" + fmt_double(r.diagnostics.back().momentum_deviation);
  } else {
    cr.name = "mode_off_shell_escape";
    cr.pass = r.diagnostics.back().escape_fraction > 0.0;
    cr.detail = "escape_fraction=" + fmt_double(r.diagnostics.back().escape_fraction);
  }
  res.criteria.push_back(cr);
}

void run_field_sample(const ScenarioConfig& cfg, RunResult& res) {
  namespace fs = std::filesystem;
  const WaveFunction& state = *cfg.state;
  const int d = state.dimension();
  const std::string path = (fs::path(cfg.out_dir) / "field_sample.csv").string();
  std::ofstream out = open_out(path);
  out << "t";
  for (int i = 0; i < d; ++i) out << ",q" << (i + 1);
  out << ",re_psi,im_psi,density";
  for (int i = 0; i < d; ++i) out << ",v" << (i + 1);
  out << ",Q";
  for (int i = 0; i < d; ++i) out << ",force" << (i + 1);
  out << ",near_node\n";

  QForceOptions qopts;
  qopts.fd_step = cfg.integrator.fd_step;
  qopts.node_epsilon = cfg.integrator.node_epsilon;
  auto emit = [&](const Vec& q, double t) {
    const WaveSample s = evaluate(state, q, t, cfg.mass, qopts);
    out << fmt_double(t);
    for (int i = 0; i < d; ++i) out << ',' << fmt_double(q[i]);
    out << ',' << fmt_double(std::real(s.psi)) << ',' << fmt_double(std::imag(s.psi))
        << ',' << fmt_double(s.density);
    for (int i = 0; i < d; ++i) out << ',' << fmt_double(s.velocity[i]);
    out << ',' << fmt_double(s.quantum_potential);
    for (int i = 0; i < d; ++i) out << ',' << fmt_double(s.bohm_force[i]);
    out << ',' << (s.near_node ? 1 : 0) << '\n';
  };

  if (d == 1) {
    const double half = state.bulk_halfwidth() - 6.0;
    for (double t : linspace(cfg.t0, cfg.t1 > cfg.t0 ? cfg.t1 : kTwoPi, 33))
      for (double x : linspace(-half, half, 257)) emit(Vec{x}, t);
  } else {
    emit(resize_to(cfg.q0, d), cfg.t0);
  }
  res.artifacts.push_back("field_sample.csv");
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  namespace fs = std::filesystem;
  if (!cfg.state) throw ConfigError("scenario has no state");
  if (cfg.kind.empty()) throw ConfigError("scenario has no kind");
  cfg.integrator.validate();
  fs::create_directories(cfg.out_dir);

  RunResult res;
  try {
    if (cfg.kind == "trajectory") {
      run_trajectory(cfg, res);
    } else if (cfg.kind == "ensemble") {
      run_ensemble(cfg, res);
    } else if (cfg.kind == "asymptotic-bound") {
      run_bound(cfg, res);
    } else if (cfg.kind == "liouville") {
      run_liouville(cfg, res);
    } else if (cfg.kind == "field-mode") {
      run_field_mode(cfg, res);
    } else if (cfg.kind == "field-sample") {
      run_field_sample(cfg, res);
    } else {
      throw ConfigError("unknown scenario kind '" + cfg.kind + "'");
    }
  } catch (const NodeProximityError&) {
    res.exit_code = 3;
    write_manifest(cfg, res);
    throw;
  }

  if (res.exit_code == 0) {
    for (const CriterionResult& c : res.criteria)
      if (!c.pass) res.exit_code = 1;
  }
  write_manifest(cfg, res);
  return res;
}

}  // namespace pilotwave
