#pragma once

// Run configuration: flat JSON whose keys are the parameter symbols
// (tau_c, lambda_c, gamma_cu, theta_c, eps_s, t_max0, ...), plus the
// deployability gates checked before any episode runs.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hrr/rrc.hpp"
#include "hrr/tasks/factory.hpp"

namespace hrr {

struct RunConfig {
  TaskKind task = TaskKind::dde;
  Difficulty difficulty = Difficulty::standard;
  int n_episodes = 500;
  int warmup_episodes = 100;
  int n_seeds = 5;
  std::uint64_t seed = 1;
  bool warm_start_enabled = true;
  bool write_traces = true;
  EpisodeConfig episode;

  // Domain checks and warmup_episodes < n_episodes; throws ConfigError.
  void validate() const;
};

// Throws ConfigError on unknown keys, wrong types or out-of-domain values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Every key, so that parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const RunConfig& config);

// Numeric parameter override by key, validated; throws ConfigError.
RunConfig with_parameter(const RunConfig& config, const std::string& key, double value);
double parameter_value(const RunConfig& config, const std::string& key);

struct GateReport {
  StabilityReport stability;
  DtBounds bounds;
  double dt = 1.0;
  bool dt_ok = false;

  bool pass() const { return stability.pass() && dt_ok; }
  std::vector<std::string> lines() const;
};

GateReport check_gates(const HormoneParams& p, double chi_max = 1.0);

// Throws GateError carrying the failing inequalities.
void enforce_gates(const HormoneParams& p);

}  // namespace hrr
