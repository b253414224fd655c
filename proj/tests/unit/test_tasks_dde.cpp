#include <gtest/gtest.h>

#include <cmath>

#include "hrr/rrc.hpp"
#include "hrr/tasks/dde.hpp"
#include "hrr/tasks/factory.hpp"

#include <nlohmann/json.hpp>

namespace hrr {
namespace {

// Normal equations solved by Cramer's rule on the raw series.
Theta least_squares_oracle(const DdeInstance& inst) {
  double a11 = 0, a12 = 0, a22 = 0, c1 = 0, c2 = 0;
  for (std::size_t t = 1; t + 1 < inst.x.size(); ++t) {
    a11 += inst.x[t] * inst.x[t];
    a12 += inst.x[t] * inst.x[t - 1];
    a22 += inst.x[t - 1] * inst.x[t - 1];
    c1 += inst.x[t] * inst.x[t + 1];
    c2 += inst.x[t - 1] * inst.x[t + 1];
  }
  const double det = a11 * a22 - a12 * a12;
  return {(a22 * c1 - a12 * c2) / det, (a11 * c2 - a12 * c1) / det};
}

TEST(Dde, SpectralStability) {
  EXPECT_TRUE(spectrally_stable({0.5, 0.3}));
  EXPECT_FALSE(spectrally_stable({0.9, 0.5}));
  EXPECT_FALSE(spectrally_stable({0.0, -1.0}));
}

TEST(Dde, GeneratorDeterministicAndStable) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DdeInstance a = generate_dde(seed);
    const DdeInstance b = generate_dde(seed);
    EXPECT_EQ(a.theta, b.theta);
    EXPECT_EQ(a.x, b.x);
    EXPECT_TRUE(spectrally_stable(a.theta));
    for (std::size_t t = 1; t + 1 < a.x.size(); ++t)
      EXPECT_NEAR(a.x[t + 1], a.theta[0] * a.x[t] + a.theta[1] * a.x[t - 1], 1e-15);
  }
}

TEST(Dde, OracleRecoversTrueParameters) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const DdeInstance inst = generate_dde(seed);
    const DdeTask task(inst);
    const Theta ls = least_squares_oracle(inst);
    EXPECT_NEAR(task.oracle()[0], inst.theta[0], 1e-8);
    EXPECT_NEAR(task.oracle()[1], inst.theta[1], 1e-8);
    EXPECT_NEAR(task.oracle()[0], ls[0], 1e-12);
    EXPECT_NEAR(task.oracle()[1], ls[1], 1e-12);
  }
}

TEST(Dde, OptimumHasZeroResidualAndDelta) {
  const DdeInstance inst = generate_dde(8);
  const DdeTask task(inst);
  const Theta& th = inst.theta;
  EXPECT_NEAR(task.residual(th), 0.0, 1e-20);
  EXPECT_NEAR(task.gradient(th)[0], 0.0, 1e-12);
  EXPECT_NEAR(task.gradient(th)[1], 0.0, 1e-12);
  const CognitiveState s = DdeTask::to_state(th);
  const HypothesisSet hyp;
  for (AgentId id : {AgentId::R1A, AgentId::R1C, AgentId::R1D}) {
    const AgentDelta d = task.delta(id, s, task.decode(s), hyp);
    EXPECT_NEAR(d.delta[0], 0.0, 1e-9);
    EXPECT_NEAR(d.delta[1], 0.0, 1e-9);
  }
}

TEST(Dde, GradientMatchesFiniteDifferences) {
  Rng rng(1000);
  const double h = 1e-5;
  for (int probe = 0; probe < 1000; ++probe) {
    const DdeTask task(generate_dde(static_cast<std::uint64_t>(probe % 50)));
    const Theta th{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Theta g = task.gradient(th);
    const Theta fd{
        (task.residual({th[0] + h, th[1]}) - task.residual({th[0] - h, th[1]})) / (2 * h),
        (task.residual({th[0], th[1] + h}) - task.residual({th[0], th[1] - h})) / (2 * h)};
    const double scale = std::max(1.0, std::hypot(g[0], g[1]));
    EXPECT_LE(std::hypot(g[0] - fd[0], g[1] - fd[1]) / scale, 1e-6) << "probe " << probe;
  }
}

TEST(Dde, NewtonStepLandsOnOptimum) {
  const DdeInstance inst = generate_dde(3);
  const DdeTask task(inst);
  const Theta t = task.newton_target({0.1, -0.2});
  EXPECT_NEAR(t[0], task.oracle()[0], 1e-9);
  EXPECT_NEAR(t[1], task.oracle()[1], 1e-9);
}

TEST(Dde, LineSearchDecreasesResidual) {
  Rng rng(2);
  const DdeTask task(generate_dde(6));
  for (int i = 0; i < 200; ++i) {
    const Theta th{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    EXPECT_LE(task.residual(task.line_search_target(th)), task.residual(th) + 1e-12);
  }
}

TEST(Dde, DecodeStaysInBox) {
  const DdeTask task(generate_dde(1));
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Output y = task.decode({rng.uniform(), rng.uniform()});
    const Theta th = DdeTask::theta_of(y);
    EXPECT_LE(std::abs(th[0]), 1.0);
    EXPECT_LE(std::abs(th[1]), 1.0);
  }
}

TEST(Dde, DistributionIsNormalised) {
  const DdeTask task(generate_dde(1));
  const CognitiveState s{0.3, 0.6};
  const OutputDistribution p = task.distribution(s, task.decode(s));
  ASSERT_EQ(p.size(), 441u);
  double total = 0.0;
  for (double x : p) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const CognitiveState at = DdeTask::to_state(task.oracle());
  const OutputDistribution q = task.distribution(at, task.decode(at));
  EXPECT_NEAR(*std::max_element(q.begin(), q.end()), 1.0, 1e-9);
}

TEST(Dde, AxiomsAndCorrectness) {
  const DdeTask task(generate_dde(4));
  const Theta o = task.oracle();
  const Output good{o[0] * 100, o[1] * 100};
  EXPECT_TRUE(task.axioms(good).empty());
  EXPECT_TRUE(task.is_correct(good));
  const Output off{o[0] * 100 + 2.0, o[1] * 100};
  EXPECT_FALSE(task.is_correct(off));
  const Output unstable{90.0, 50.0};
  bool named = false;
  for (const Violation& v : task.axioms(unstable)) named |= v.constraint == "stability";
  EXPECT_TRUE(named);
}

TEST(Dde, InstanceJsonRoundTrip) {
  const DdeInstance inst = generate_dde(21);
  const auto task = task_from_json(to_json(inst));
  ASSERT_EQ(task->name(), "dde");
  const DdeTask direct(inst);
  EXPECT_EQ(task->decode({0.4, 0.7}), direct.decode({0.4, 0.7}));
  EXPECT_TRUE(task->is_correct({direct.oracle()[0] * 100, direct.oracle()[1] * 100}));
}

TEST(Dde, EpisodesReachOracle) {
  EngramStore store;
  int correct = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const DdeTask task(generate_dde(seed));
    correct += run_episode(task, EpisodeConfig{}, store, seed).correct ? 1 : 0;
  }
  EXPECT_GE(correct, 28);
}

}  // namespace
}  // namespace hrr
