#pragma once

// Experiment driver: seeded multi-episode runs sharing one engram store per
// seed, metric computation, one-at-a-time sensitivity sweeps and CSV reports.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hrr/config.hpp"
#include "hrr/rrc.hpp"

namespace hrr {

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<EpisodeTrace> episodes;  // in order, warm-up first
  EpisodeTrace baseline;               // single forced pass
};

struct RhoEstimate {
  double value = 0.0;
  bool flagged = false;  // no contraction observed, value clipped
};

struct MetricsSummary {
  std::size_t n_eval = 0;
  double rsr = 0.0;
  double t_star_mean = 0.0;
  double t_star_std = 0.0;
  double e_cog_mean = 0.0;
  double e_baseline = 0.0;
  double frugality_fp = 0.0;
  double criterion_fraction = 0.0;
  std::vector<double> v_traj;
  std::vector<double> h_traj;
  std::optional<double> pearson_r;
  RhoEstimate rho_hat;
  std::optional<double> mu_hat;
};

// Seed of run k and instance seed of episode e within it.
std::uint64_t run_seed(std::uint64_t base, int k);
std::uint64_t instance_seed(std::uint64_t run, int episode);

// Evaluation episodes only (warm-up excluded).
std::vector<const EpisodeTrace*> evaluation_episodes(const std::vector<EpisodeTrace>& traces);

double rsr(const std::vector<const EpisodeTrace*>& traces);
double frugality(double e_mean, double e_baseline);

// Sample Pearson coefficient; nullopt for lengths < 3 or constant series.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

// Per-iteration average; episodes shorter than t are left out at t.
std::vector<double> averaged_series(const std::vector<const EpisodeTrace*>& traces,
                                    double CycleRecord::*field);

// Geometric mean of eps(t)/eps(t-1) over t in [2, t*-1], averaged across
// episodes, clipped into (0,1).
RhoEstimate estimate_rho(const std::vector<const EpisodeTrace*>& traces);
RhoEstimate estimate_rho(const std::vector<std::vector<double>>& eps_series);

// Mean per-cycle log decay rate of V over the same mid-episode window.
std::optional<double> estimate_mu(const std::vector<const EpisodeTrace*>& traces);

MetricsSummary summarize(const SeedRun& run);

struct ExperimentResult {
  RunConfig config;
  std::vector<SeedRun> runs;
  std::vector<MetricsSummary> per_seed;
};

// Throws GateError before running anything if the gates fail.
ExperimentResult run_experiment(const RunConfig& config);

// Per-seed episodes only, for callers that do not need the whole result.
SeedRun run_seed_sequence(const RunConfig& config, std::uint64_t seed);

// Writes config.json, traces/ (if enabled), summary.csv, series_v.csv, series_h.csv.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

// summary.csv, series_v.csv and series_h.csv only.
void write_reports(const ExperimentResult& result, const std::filesystem::path& dir);

// Rebuilds the result from a directory written by write_outputs.
ExperimentResult read_outputs(const std::filesystem::path& dir);

void write_summary_csv(std::ostream& os, const ExperimentResult& result);
void write_series_csv(std::ostream& os, const ExperimentResult& result, bool lyapunov);

struct SweepRow {
  std::string param;
  double offset = 0.0;
  double value = 0.0;
  bool gate_ok = true;
  std::string gate_message;
  double rsr = 0.0;
  double t_star_mean = 0.0;
};

inline constexpr int kSweepEpisodes = 50;
inline constexpr int kSweepWarmup = 10;

// Parameters accepted by sweep.
const std::vector<std::string>& sweep_parameters();

// For each offset, value = base * (1 + offset); gate failures are flagged
// rows, otherwise every task runs kSweepEpisodes episodes and the metrics are
// averaged over tasks.
std::vector<SweepRow> sweep(const RunConfig& base, const std::string& param,
                            const std::vector<double>& offsets = {-0.30, 0.0, 0.30},
                            const std::vector<TaskKind>& tasks = {TaskKind::sudoku, TaskKind::maze,
                                                                  TaskKind::dde});

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace hrr
