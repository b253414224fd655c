#include <gtest/gtest.h>

#include "hrr/agents.hpp"
#include "hrr/tasks/dde.hpp"
#include "hrr/tasks/sudoku.hpp"
#include "stub_task.hpp"

namespace hrr {
namespace {

HormoneVector field(double hc, double hu) {
  HormoneVector h;
  h.clarity = hc;
  h.confusion = hu;
  return h;
}

const AgentSpec& spec_of(const Registry& r, AgentId id) {
  return r[static_cast<std::size_t>(index_of(id))];
}

TEST(Agents, RegistryMatchesAgentTable) {
  const Registry r = default_registry();
  ASSERT_EQ(r.size(), 12u);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(index_of(r[i].id), static_cast<int>(i));
  const std::array<double, 12> thresholds{0.25, 0.35, 0.30, 0.40, 0.0, 0.0,
                                          0.30, 0.35, 0.0,  0.25, 0.0, 0.0};
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i].threshold, thresholds[i]);
  EXPECT_EQ(spec_of(r, AgentId::R1B).ttl, 3);
  EXPECT_EQ(spec_of(r, AgentId::R1B).cooldown, 2);
  EXPECT_EQ(spec_of(r, AgentId::R2A).activation, Activation::persistent);
  EXPECT_EQ(spec_of(r, AgentId::R2B).activation, Activation::persistent);
  EXPECT_EQ(spec_of(r, AgentId::R3A).activation, Activation::persistent);
  EXPECT_EQ(spec_of(r, AgentId::R3C).activation, Activation::event);
  for (const AgentSpec& s : r) EXPECT_GT(s.cost, 0.0);
}

TEST(Agents, NamesRoundTrip) {
  for (AgentId id : kAllAgents) EXPECT_EQ(agent_from_string(to_string(id)), id);
  EXPECT_FALSE(agent_from_string("R4A").has_value());
}

TEST(Agents, UtilityCoefficients) {
  HormoneVector h = field(0.3, 0.6);
  h.curiosity = 0.5;
  h.energy = 0.4;
  h.alertness = 0.7;
  CycleContext ctx;
  ctx.err_norm_prev = 0.2;
  EXPECT_NEAR(utility(AgentId::R1A, h, ctx), 0.6 * 0.6 + 0.4 * 0.7, 1e-15);
  EXPECT_NEAR(utility(AgentId::R1B, h, ctx), 0.5 * 0.6 + 0.3 * 0.5 + 0.2 * 0.7, 1e-15);
  EXPECT_NEAR(utility(AgentId::R1C, h, ctx), 0.7 * 0.6 - 0.3 * 0.4, 1e-15);
  EXPECT_NEAR(utility(AgentId::R1D, h, ctx), 0.6 * 0.6 + 0.2 * 0.7, 1e-15);
  EXPECT_NEAR(utility(AgentId::R2C, h, ctx), 0.5 * 0.3 + 0.3 * 0.4 + 0.2 * 0.8, 1e-15);
  EXPECT_NEAR(utility(AgentId::R2D, h, ctx), 0.6 * 0.6 + 0.3 * 0.7, 1e-15);
  EXPECT_NEAR(utility(AgentId::R3B, h, ctx), 0.5 * 0.3 + 0.3 * 0.4 + 0.2 * 0.6, 1e-15);
  EXPECT_EQ(utility(AgentId::R2A, h, ctx), 1.0);
}

TEST(Agents, EligibilityWorkedExamples) {
  const Registry r = default_registry();
  const AgentSpec& r1a = spec_of(r, AgentId::R1A);
  CycleContext ctx;
  ctx.t = 1;
  const Eligibility e = eligibility(r1a, initial_runtime(r1a), field(0.5, 0.5), ctx);
  EXPECT_NEAR(e.utility, 0.5, 1e-15);
  EXPECT_TRUE(e.eligible);
  const Eligibility converged = eligibility(r1a, initial_runtime(r1a), field(1.0, 0.0), ctx);
  EXPECT_EQ(converged.utility, 0.0);
  EXPECT_FALSE(converged.eligible);
}

TEST(Agents, WarmStartOnlyAtFirstCycle) {
  const Registry r = default_registry();
  const AgentSpec& r3c = spec_of(r, AgentId::R3C);
  CycleContext ctx;
  ctx.psm_size = 5;
  ctx.k_ret = 3;
  EXPECT_TRUE(eligibility(r3c, initial_runtime(r3c), {}, ctx).eligible);
  ctx.t = 1;
  EXPECT_FALSE(eligibility(r3c, initial_runtime(r3c), {}, ctx).eligible);
  ctx.t = 0;
  ctx.psm_size = 2;
  EXPECT_FALSE(eligibility(r3c, initial_runtime(r3c), {}, ctx).eligible);
}

TEST(Agents, TerminationGuard) {
  const Registry r = default_registry();
  CycleContext ctx;
  ctx.t = 7;
  ctx.t_eff = 7;
  const AgentSpec& r1a = spec_of(r, AgentId::R1A);
  const Eligibility guarded = eligibility(r1a, initial_runtime(r1a), field(0.0, 1.0), ctx);
  EXPECT_EQ(guarded.utility, 0.0);
  EXPECT_FALSE(guarded.eligible);
  const AgentSpec& r3d = spec_of(r, AgentId::R3D);
  EXPECT_TRUE(eligibility(r3d, initial_runtime(r3d), {}, ctx).eligible);
  ctx.t = 3;
  EXPECT_FALSE(eligibility(r3d, initial_runtime(r3d), {}, ctx).eligible);
  ctx.stop_flag = true;
  EXPECT_TRUE(eligibility(r3d, initial_runtime(r3d), {}, ctx).eligible);
}

TEST(Agents, TickEntersCooldownWhenTtlExpires) {
  const AgentSpec r1b = spec_of(default_registry(), AgentId::R1B);
  AgentRuntime rt;
  rt.ttl_remaining = 1;
  rt = tick(r1b, rt, true, 4);
  EXPECT_EQ(rt.cooldown_remaining, 2);
  EXPECT_EQ(rt.ttl_remaining, 3);
  EXPECT_EQ(rt.last_active_cycle, 4);
  CycleContext ctx;
  ctx.t = 5;
  EXPECT_FALSE(eligibility(r1b, rt, field(0.0, 1.0), ctx).eligible);
  rt = tick(r1b, rt, false, 5);
  EXPECT_EQ(rt.cooldown_remaining, 1);
  rt = tick(r1b, rt, false, 6);
  EXPECT_EQ(rt.cooldown_remaining, 0);
  EXPECT_TRUE(eligibility(r1b, rt, field(0.0, 1.0), ctx).eligible);
}

TEST(Agents, PersistentCountersNeverBlock) {
  const AgentSpec r2a = spec_of(default_registry(), AgentId::R2A);
  AgentRuntime rt = initial_runtime(r2a);
  CycleContext ctx;
  for (int t = 0; t < 50; ++t) {
    ctx.t = t;
    EXPECT_TRUE(eligibility(r2a, rt, {}, ctx).eligible);
    rt = tick(r2a, rt, true, t);
    EXPECT_EQ(rt.cooldown_remaining, 0);
  }
}

TEST(Agents, ConsistencyScore) {
  EXPECT_EQ(consistency_score(0, 0), 1.0);
  EXPECT_EQ(consistency_score(1, 4), 0.75);
  EXPECT_EQ(consistency_score(9, 4), 0.0);
}

TEST(Agents, EmptyActivationIsIdentity) {
  const test::StubTask task;
  HypothesisSet hyp;
  hyp.add({{0.5, 0.5}, 0.9});
  Rng rng(1);
  const EmissionOutcome out =
      execute_emission_agents({}, {0.2, 0.8}, {}, field(0.5, 0.5), task, hyp, rng);
  EXPECT_TRUE(out.deltas.empty());
  EXPECT_EQ(hyp.size(), 1u);
}

TEST(Agents, EmissionAgentsRunInIdOrder) {
  const test::StubTask task;
  HypothesisSet hyp;
  Rng rng(1);
  const EmissionOutcome out = execute_emission_agents(
      {AgentId::R1D, AgentId::R1A, AgentId::R1C}, {0.2, 0.8}, {}, field(0.5, 0.5), task, hyp, rng);
  ASSERT_EQ(out.deltas.size(), 3u);
  EXPECT_EQ(out.deltas[0].first, AgentId::R1A);
  EXPECT_EQ(out.deltas[1].first, AgentId::R1C);
  EXPECT_EQ(out.deltas[2].first, AgentId::R1D);
}

// 4x4 grid with a single blank: propagation leaves exactly the digit an
// exhaustive search over 1..4 admits.
TEST(Agents, PropagationPrunesNakedSingle) {
  SudokuInstance inst;
  inst.box = 2;
  inst.cells = {1, 2, 3, 4, 3, 4, 1, 2, 2, 1, 4, 3, 4, 3, 2, 0};
  const SudokuTask task(inst);
  const auto domains = task.propagate(task.encode());
  std::uint32_t oracle = 0;
  for (int d = 1; d <= 4; ++d) {
    SudokuInstance trial = inst;
    trial.cells[15] = d;
    if (count_solutions(trial, 2) == 1) oracle |= 1u << (d - 1);
  }
  EXPECT_EQ(domains.alive[15], oracle);
  EXPECT_EQ(oracle, 1u << 0);

  HypothesisSet hyp;
  Rng rng(2);
  const CognitiveState s = task.encode();
  const EmissionOutcome out =
      execute_emission_agents({AgentId::R1D}, s, task.decode(s), field(0.5, 0.5), task, hyp, rng);
  ASSERT_EQ(out.deltas.size(), 1u);
  CognitiveState next = s;
  for (std::size_t i = 0; i < s.size(); ++i) next[i] = std::clamp(s[i] + out.deltas[0].second[i], 0.0, 1.0);
  const std::vector<double> cell = task.cell_distribution(next, 15);
  EXPECT_EQ(std::max_element(cell.begin(), cell.end()) - cell.begin(), 0);
  EXPECT_NEAR(cell[1] + cell[2] + cell[3], 0.0, 1e-9);
}

TEST(Agents, VerificationOnConvergedStateStops) {
  const test::StubTask task;
  const CognitiveState s{0.4, 0.6};
  const Output y = task.decode(s);
  const HormoneVector h = field(0.8, 0.1);
  ObservationHistory hist;
  VerificationInput in{&s, &s, &y, &y, &h, true, 1.0};
  const VerificationOutcome out = execute_verification_agents(in, task, hist, {}, {});
  EXPECT_TRUE(out.stop_precheck);
  EXPECT_EQ(out.consistency, 1.0);
}

TEST(Agents, VerificationFlagsRowDuplicate) {
  const SudokuTask task(generate_sudoku(4));
  Output y(task.solution().begin(), task.solution().end());
  y[1] = y[0];
  const CognitiveState s = task.encode();
  const Output y_prev = task.decode(s);
  const HormoneVector h = field(0.5, 0.5);
  ObservationHistory hist;
  VerificationInput in{&s, &s, &y, &y_prev, &h, true, 1.0};
  const VerificationOutcome out = execute_verification_agents(in, task, hist, {}, {});
  EXPECT_LT(out.consistency, 1.0);
  bool named = false;
  for (const Violation& v : out.violations) named |= v.constraint == "row 1";
  EXPECT_TRUE(named);
}

TEST(Agents, InactiveConsistencyCheckHoldsLastValue) {
  const test::StubTask task;
  const CognitiveState s{0.4, 0.6};
  const Output y = task.decode(s);
  const HormoneVector h = field(0.5, 0.5);
  ObservationHistory hist;
  VerificationInput in{&s, &s, &y, &y, &h, false, 0.625};
  const VerificationOutcome out = execute_verification_agents(in, task, hist, {}, {});
  EXPECT_EQ(out.consistency, 0.625);
  EXPECT_EQ(out.observation.consistency, 0.625);
}

TEST(Agents, DdeNewtonDeltaFollowsFiniteDifferenceGradient) {
  const DdeTask task(generate_dde(31));
  const CognitiveState s{0.55, 0.45};
  const Theta th = DdeTask::to_theta(s);
  const double h = 1e-5;
  const Theta fd{(task.residual({th[0] + h, th[1]}) - task.residual({th[0] - h, th[1]})) / (2 * h),
                 (task.residual({th[0], th[1] + h}) - task.residual({th[0], th[1] - h})) / (2 * h)};
  HypothesisSet hyp;
  Rng rng(1);
  const EmissionOutcome out =
      execute_emission_agents({AgentId::R1A}, s, task.decode(s), field(0.5, 0.5), task, hyp, rng);
  ASSERT_EQ(out.deltas.size(), 1u);
  const Theta target = task.newton_target(th);
  const CognitiveState expected = pull_towards(s, DdeTask::to_state(target), DdeTask::kGain);
  EXPECT_NEAR(out.deltas[0].second[0], expected[0], 1e-15);
  EXPECT_NEAR(out.deltas[0].second[1], expected[1], 1e-15);
  // The Newton step is a descent direction for the finite-difference gradient.
  const double along = (target[0] - th[0]) * fd[0] + (target[1] - th[1]) * fd[1];
  EXPECT_LT(along, 0.0);
}

}  // namespace
}  // namespace hrr
