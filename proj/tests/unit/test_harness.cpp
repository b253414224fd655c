#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrr/errors.hpp"
#include "hrr/harness.hpp"

namespace hrr {
namespace {

EpisodeTrace episode(bool correct, int t_star, bool warmup = false) {
  EpisodeTrace t;
  t.correct = correct;
  t.t_star = t_star;
  t.warmup = warmup;
  t.cycles.resize(static_cast<std::size_t>(t_star) + 1);
  return t;
}

RunConfig small(TaskKind task, int episodes, int warmup, int seeds) {
  RunConfig c;
  c.task = task;
  c.n_episodes = episodes;
  c.warmup_episodes = warmup;
  c.n_seeds = seeds;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Harness, RsrCounting) {
  std::vector<EpisodeTrace> all{episode(true, 3), episode(true, 3), episode(true, 3), episode(false, 3)};
  const auto eval = evaluation_episodes(all);
  EXPECT_EQ(rsr(eval), 0.75);
  for (auto& e : all) e.correct = true;
  EXPECT_EQ(rsr(evaluation_episodes(all)), 1.0);
  for (auto& e : all) e.correct = false;
  EXPECT_EQ(rsr(evaluation_episodes(all)), 0.0);
}

TEST(Harness, WarmupExcluded) {
  std::vector<EpisodeTrace> all{episode(false, 9, true), episode(true, 3), episode(true, 5)};
  const auto eval = evaluation_episodes(all);
  ASSERT_EQ(eval.size(), 2u);
  EXPECT_EQ(rsr(eval), 1.0);
}

TEST(Harness, Frugality) {
  EXPECT_EQ(frugality(4.0, 4.0), 0.0);
  EXPECT_EQ(frugality(2.0, 4.0), 0.5);
  EXPECT_NEAR(frugality(0.22, 1.0), 0.78, 1e-12);
  EXPECT_THROW(frugality(1.0, 0.0), std::invalid_argument);
}

TEST(Harness, Pearson) {
  EXPECT_NEAR(*pearson({1, 2, 3, 4}, {1, 2, 3, 4}), 1.0, 1e-12);
  EXPECT_NEAR(*pearson({1, 2, 3, 4}, {-1, -2, -3, -4}), -1.0, 1e-12);
  EXPECT_NEAR(*pearson({1, 2, 3}, {1, 2, 4}), 0.98198, 1e-5);
  EXPECT_FALSE(pearson({1, 2}, {1, 2}).has_value());
  EXPECT_FALSE(pearson({1, 1, 1}, {1, 2, 3}).has_value());
}

TEST(Harness, RhoEstimates) {
  const RhoEstimate halving = estimate_rho(std::vector<std::vector<double>>{{0, 1, 0.5, 0.25, 0.125, 0}});
  EXPECT_NEAR(halving.value, 0.5, 1e-12);
  EXPECT_FALSE(halving.flagged);
  const RhoEstimate flat = estimate_rho(std::vector<std::vector<double>>{{0, 1, 1, 1, 1, 0}});
  EXPECT_TRUE(flat.flagged);
  EXPECT_LT(flat.value, 1.0);
  EXPECT_GT(flat.value, 0.999);
  const RhoEstimate mixed = estimate_rho(std::vector<std::vector<double>>{{0, 1, 0.8, 0.72, 0}});
  EXPECT_NEAR(mixed.value, std::sqrt(0.72), 1e-12);
  EXPECT_NEAR(mixed.value, 0.8485, 1e-4);
}

TEST(Harness, AveragedSeriesRaggedTail) {
  EpisodeTrace a = episode(true, 2), b = episode(true, 4);
  for (std::size_t t = 0; t < a.cycles.size(); ++t) a.cycles[t].entropy = 1.0;
  for (std::size_t t = 0; t < b.cycles.size(); ++t) b.cycles[t].entropy = 3.0;
  const auto series = averaged_series({&a, &b}, &CycleRecord::entropy);
  EXPECT_EQ(series, (std::vector<double>{2, 2, 2, 3, 3}));
}

TEST(Harness, SeedsAreDistinct) {
  EXPECT_NE(run_seed(1, 0), run_seed(1, 1));
  EXPECT_NE(instance_seed(5, 0), instance_seed(5, 1));
}

TEST(Harness, SingleEpisodeSummary) {
  RunConfig c = small(TaskKind::dde, 1, 0, 1);
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.per_seed.size(), 1u);
  EXPECT_EQ(r.per_seed[0].n_eval, 1u);
  EXPECT_EQ(r.per_seed[0].t_star_mean, r.runs[0].episodes[0].t_star);
}

TEST(Harness, DeterministicAcrossRuns) {
  const RunConfig c = small(TaskKind::dde, 12, 4, 2);
  const ExperimentResult a = run_experiment(c), b = run_experiment(c);
  std::stringstream sa, sb;
  write_summary_csv(sa, a);
  write_summary_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t k = 0; k < a.runs.size(); ++k) EXPECT_EQ(a.runs[k].episodes, b.runs[k].episodes);
}

TEST(Harness, WarmStartDisabledNeverFiresR3C) {
  RunConfig c = small(TaskKind::dde, 15, 5, 1);
  c.warm_start_enabled = false;
  const ExperimentResult r = run_experiment(c);
  for (const EpisodeTrace& tr : r.runs[0].episodes) {
    EXPECT_FALSE(tr.warm_flag);
    for (const CycleRecord& cy : tr.cycles)
      EXPECT_EQ(std::find(cy.active.begin(), cy.active.end(), AgentId::R3C), cy.active.end());
  }
}

TEST(Harness, GateFailureStopsExperiment) {
  RunConfig c = small(TaskKind::dde, 2, 0, 1);
  c.episode.hormones.clarity.lambda = 0.65;
  EXPECT_THROW(run_experiment(c), GateError);
}

TEST(Harness, OutputsRecomputeFromTraces) {
  const RunConfig c = small(TaskKind::dde, 10, 3, 2);
  const ExperimentResult r = run_experiment(c);
  const auto dir = std::filesystem::temp_directory_path() / "hrr_harness_outputs";
  std::filesystem::remove_all(dir);
  write_outputs(r, dir);
  for (const char* f : {"config.json", "summary.csv", "series_v.csv", "series_h.csv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  const ExperimentResult back = read_outputs(dir);
  ASSERT_EQ(back.per_seed.size(), r.per_seed.size());
  for (std::size_t k = 0; k < r.per_seed.size(); ++k) {
    const MetricsSummary &x = r.per_seed[k], &y = back.per_seed[k];
    EXPECT_NEAR(x.rsr, y.rsr, 1e-12);
    EXPECT_NEAR(x.t_star_mean, y.t_star_mean, 1e-12);
    EXPECT_NEAR(x.t_star_std, y.t_star_std, 1e-12);
    EXPECT_NEAR(x.e_cog_mean, y.e_cog_mean, 1e-12);
    EXPECT_NEAR(x.frugality_fp, y.frugality_fp, 1e-12);
  }
  std::stringstream again;
  write_summary_csv(again, back);
  EXPECT_EQ(again.str(), slurp(dir / "summary.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Harness, SweepFlagsUnstableClarityDecay) {
  RunConfig c = small(TaskKind::dde, 4, 1, 1);
  const auto rows = sweep(c, "lambda_c", {-0.30}, {TaskKind::dde});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].gate_ok);
  EXPECT_NEAR(rows[0].value, 0.525, 1e-12);
  EXPECT_THROW(sweep(c, "not_a_parameter"), ConfigError);
}

TEST(Harness, SweepIdentityPointReproducesBaseRun) {
  const RunConfig c = small(TaskKind::dde, 4, 1, 1);
  const auto a = sweep(c, "theta_c", {0.0}, {TaskKind::dde});
  const auto b = sweep(c, "theta_u", {0.0}, {TaskKind::dde});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].rsr, b[0].rsr);
  EXPECT_EQ(a[0].t_star_mean, b[0].t_star_mean);
}

}  // namespace
}  // namespace hrr
