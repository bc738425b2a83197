// Scenario-driven front end: every experiment in the suite is a subcommand
// that writes CSV artifacts plus a manifest into --out.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "pilotwave/acceptance.hpp"
#include "pilotwave/scenario.hpp"

namespace {

using namespace pilotwave;

struct CommonFlags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int threads = 0;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
  cmd->add_option("--config", fl.config, "scenario config file (key = value sections)");
  cmd->add_option("--out", fl.out, "output directory");
  cmd->add_option("--seed", fl.seed, "RNG seed")->each([&](const std::string&) {
    fl.have_seed = true;
  });
  cmd->add_option("--threads", fl.threads, "worker threads for ensemble evolution");
  cmd->add_flag("--strict", fl.strict, "exit nonzero when a criterion fails");
}

int execute(ScenarioConfig cfg, const CommonFlags& fl) {
  try {
    if (!fl.config.empty()) apply_config(cfg, ConfigFile::parse_file(fl.config));
    if (!fl.out.empty()) cfg.out_dir = fl.out;
    if (fl.have_seed) cfg.seed = fl.seed;
    if (fl.threads > 0) cfg.threads = fl.threads;
    cfg.strict = fl.strict;

    const RunResult res = run_scenario(cfg);
    for (const CriterionResult& c : res.criteria)
      std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail
                << '\n';
    for (const std::string& a : res.artifacts) {
      std::cout << "wrote " << cfg.out_dir << '/' << a;
      std::ifstream head(cfg.out_dir + "/" + a);
      std::string columns;
      if (std::getline(head, columns) && !columns.empty())
        std::cout << "  (columns: " << columns << ")";
      std::cout << '\n';
    }
    if (res.exit_code == 1 && !cfg.strict) return 0;
    return res.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NodeProximityError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pilot-wave and quantum-potential dynamics toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("pilotwave ") + kVersion);

  struct Sub {
    CLI::App* cmd;
    CommonFlags fl;
    std::string kind;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto add_kind = [&](const std::string& name, const std::string& help,
                      const std::string& kind) {
    auto s = std::make_unique<Sub>();
    s->cmd = app.add_subcommand(name, help);
    s->kind = kind;
    add_common(s->cmd, s->fl);
    subs.push_back(std::move(s));
    return subs.back().get();
  };

  add_kind("field-sample", "tabulate psi, velocity, Q and the Bohm force", "field-sample");
  add_kind("trajectory", "integrate a single trajectory under either law", "trajectory");
  add_kind("ensemble", "sample and evolve a phase-space ensemble", "ensemble");
  add_kind("asymptotic-bound", "grid check of the a > -b/x^2 tail bound",
           "asymptotic-bound");
  add_kind("liouville", "phase-space parcel volume transport test", "liouville");
  add_kind("field-mode", "2-D field-mode ensemble run", "field-mode");

  auto* figures = app.add_subcommand("figures", "reproduce a numbered experiment");
  std::string fig_name;
  figures->add_option("name", fig_name, "one of: fig1 fig2 fig3 fig4")->required();
  CommonFlags fig_fl;
  add_common(figures, fig_fl);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  std::vector<int> only;
  selftest->add_option("--criterion", only, "run only these criteria (1-13)");
  int st_threads = 2;
  selftest->add_option("--threads", st_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const auto& s : subs) {
    if (s->cmd->parsed()) {
      ScenarioConfig cfg;
      try {
        if (s->kind == "asymptotic-bound") {
          cfg = preset("fig1");
        } else if (s->kind == "liouville") {
          cfg = preset("liouville");
        } else if (s->kind == "field-mode") {
          cfg = preset("field-mode");
        } else {
          cfg = preset("fig1");  // supplies the default three-level oscillator state
          cfg.kind = s->kind;
          cfg.name = s->kind;
          if (s->kind == "trajectory") {
            cfg.q0 = Vec{1.0};
            cfg.t1 = 10.0;
          }
        }
        cfg.kind = s->kind;
        cfg.name = (s->kind == cfg.name) ? cfg.name : s->kind;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
      return execute(std::move(cfg), s->fl);
    }
  }

  if (figures->parsed()) {
    ScenarioConfig cfg;
    try {
      cfg = preset(fig_name);
    } catch (const std::exception& e) {
      std::cerr << "unknown figure '" << fig_name << "'\n";
      return 2;
    }
    if (cfg.out_dir == "out") cfg.out_dir = fig_name;
    return execute(std::move(cfg), fig_fl);
  }

  if (selftest->parsed()) {
    AcceptanceOptions opts;
    opts.threads = std::max(1, st_threads);
    opts.only = only;
    const int failures = run_acceptance(std::cout, opts);
    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
  }

  return 2;
}
