// hrr: gate checks, experiment runs, sensitivity sweeps and reports.
//
// Exit codes: 0 success, 1 runtime failure, 2 gate failure, 3 config error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hrr/config.hpp"
#include "hrr/errors.hpp"
#include "hrr/harness.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitGate = 2;
constexpr int kExitConfig = 3;

hrr::RunConfig config_or_default(const std::string& path) {
  return path.empty() ? hrr::RunConfig{} : hrr::load_config(path);
}

int cmd_check(const std::string& path) {
  const hrr::RunConfig cfg = config_or_default(path);
  const hrr::GateReport r = hrr::check_gates(cfg.episode.hormones);
  for (const auto& line : r.lines()) std::cout << line << '\n';
  std::cout << (r.pass() ? "gates: PASS" : "gates: FAIL") << '\n';
  return r.pass() ? 0 : kExitGate;
}

void print_summary(const hrr::ExperimentResult& r) {
  hrr::write_summary_csv(std::cout, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hormonally regulated recursive reasoning engine"};
  app.require_subcommand(1);

  std::string config_path;
  auto* check = app.add_subcommand("check", "Evaluate the stability and step-size gates");
  check->add_option("--config", config_path, "JSON config (defaults if omitted)");

  std::string task;
  std::optional<int> episodes, seeds, warmup;
  std::string out_dir;
  bool no_warm = false;
  bool no_traces = false;
  auto* run = app.add_subcommand("run", "Run a seeded multi-episode experiment");
  run->add_option("--task", task, "sudoku, maze or dde")->required();
  run->add_option("--config", config_path, "JSON config (defaults if omitted)");
  run->add_option("--episodes", episodes, "Episodes per seed");
  run->add_option("--warmup", warmup, "Warm-up episodes per seed");
  run->add_option("--seeds", seeds, "Independent seeds");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--no-warm-start", no_warm, "Disable warm start");
  run->add_flag("--no-traces", no_traces, "Skip per-episode trace files");

  std::string param;
  auto* sweep = app.add_subcommand("sweep", "One-at-a-time sensitivity sweep (+-30%)");
  sweep->add_option("--param", param, "gamma_cu, gamma_uc, lambda_c, lambda_u, theta_c, theta_u")
      ->required();
  sweep->add_option("--config", config_path, "JSON config (defaults if omitted)");
  sweep->add_option("--out", out_dir, "Output directory")->required();

  std::string in_dir;
  auto* report = app.add_subcommand("report", "Recompute CSV reports from persisted traces");
  report->add_option("--in", in_dir, "Directory written by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*check) return cmd_check(config_path);

    if (*run) {
      hrr::RunConfig cfg = config_or_default(config_path);
      const auto kind = hrr::task_from_string(task);
      if (!kind) throw hrr::ConfigError("unknown task " + task);
      cfg.task = *kind;
      if (episodes) cfg.n_episodes = *episodes;
      if (warmup) cfg.warmup_episodes = *warmup;
      if (episodes && !warmup && cfg.warmup_episodes >= cfg.n_episodes) {
        cfg.warmup_episodes = cfg.n_episodes / 5;
      }
      if (seeds) cfg.n_seeds = *seeds;
      if (no_warm) cfg.warm_start_enabled = false;
      if (no_traces) cfg.write_traces = false;
      cfg.validate();
      const hrr::ExperimentResult r = hrr::run_experiment(cfg);
      hrr::write_outputs(r, out_dir);
      print_summary(r);
      return 0;
    }

    if (*sweep) {
      const hrr::RunConfig cfg = config_or_default(config_path);
      const auto rows = hrr::sweep(cfg, param);
      std::filesystem::create_directories(out_dir);
      std::ofstream out(std::filesystem::path(out_dir) / ("sweep_" + param + ".csv"));
      hrr::write_sweep_csv(out, rows);
      hrr::write_sweep_csv(std::cout, rows);
      return 0;
    }

    if (*report) {
      const hrr::ExperimentResult r = hrr::read_outputs(in_dir);
      hrr::write_reports(r, in_dir);
      print_summary(r);
      return 0;
    }
  } catch (const hrr::GateError& e) {
    std::cerr << "gate failure: " << e.what() << '\n';
    return kExitGate;
  } catch (const hrr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
