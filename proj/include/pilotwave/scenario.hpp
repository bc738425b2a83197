#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pilotwave/asymptotics.hpp"
#include "pilotwave/dynamics.hpp"
#include "pilotwave/ensemble.hpp"
#include "pilotwave/field_mode.hpp"
#include "pilotwave/quantum_state.hpp"

namespace pilotwave {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line = 0);
  int line;
};

// Line-oriented "[section]" / "key = value" text. Keys may repeat (lists).
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const;
  std::vector<std::string> get_all(const std::string& section,
                                   const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, std::multimap<std::string, Entry>> sections_;
  std::string origin_;
};

// Fully validated description of one run.
struct ScenarioConfig {
  std::string kind;  // field-sample | trajectory | ensemble | asymptotic-bound |
                     // liouville | field-mode | fig1..fig4
  std::string name = "custom";

  std::shared_ptr<const WaveFunction> state;
  double mass = 1.0;
  PotentialSpec potential;
  Law law = Law::bohm;
  IntegratorConfig integrator;

  // trajectory
  Vec q0;
  Vec p0;
  bool p0_on_shell = true;
  Vec p0_offset;
  double t0 = 0.0;
  double t1 = 10.0;
  int n_samples = 200;

  // ensemble
  std::string sampler = "equilibrium";  // equilibrium | blob
  std::size_t n_points = 2000;
  double blob_center_q = 2.5;   // on the curve p = dS/dx (axis 1 for d > 1)
  double blob_p_offset = 0.0;
  double blob_sigma_q = 0.05;
  double blob_sigma_p = 0.05;
  int checkpoints = 5;

  // bound check
  BoundCheckConfig bound;

  // liouville
  double parcel_edge = 1e-3;
  bool classical_control = false;
  double parcel_center_q = 0.2;

  // field mode
  FieldModeSpec mode;
  ModeRunConfig mode_run;

  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  bool strict = false;

  // Serialized (resolved) form; hashed into the manifest.
  std::string resolved_text() const;
};

// Built-in experiment presets.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Applies "[section] key = value" data over an existing config.
void apply_config(ScenarioConfig& cfg, const ConfigFile& file);

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 criterion failed, 3 numerical abort
  std::vector<CriterionResult> criteria;
  std::vector<std::string> artifacts;
};

// Executes the scenario, writes CSV artifacts plus a manifest into
// cfg.out_dir. Deterministic for fixed seed/threads.
RunResult run_scenario(const ScenarioConfig& cfg);

// Low-level CSV helpers (shared with tools/tests).
std::string fmt_double(double v);
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const WaveFunction& state, double mass);
void write_ensemble_csv(const std::string& path, const Ensemble& ens,
                        const std::string& axis_suffix = "");
void write_diagnostics_csv(const std::string& path,
                           const std::vector<double>& times,
                           const std::vector<EnsembleDiagnostics>& diags);

}  // namespace pilotwave
