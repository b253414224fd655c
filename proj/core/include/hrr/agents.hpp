#pragma once

// Twelve-agent registry: utilities, thresholds, costs and TTL/cooldown
// bookkeeping, plus execution of the emission and verification layers.

#include <array>
#include <string>
#include <vector>

#include "hrr/agent_id.hpp"
#include "hrr/hormones.hpp"
#include "hrr/observe.hpp"
#include "hrr/stop.hpp"
#include "hrr/task.hpp"

namespace hrr {

enum class AgentKind { emission, verification, governance };

// How an agent enters the active set.
enum class Activation {
  utility,     // eligible above threshold, then competes in the knapsack
  persistent,  // every cycle, outside the knapsack
  event        // fired by the loop (warm start, termination)
};

inline constexpr int kPersistentTtl = 0;

struct AgentSpec {
  AgentId id = AgentId::R1A;
  AgentKind kind = AgentKind::emission;
  Activation activation = Activation::utility;
  double threshold = 0.0;
  double cost = 1.0;
  int ttl = kPersistentTtl;  // cycles; kPersistentTtl = no limit
  int cooldown = 0;
};

struct AgentCosts {
  std::array<double, kAgentCount> value{4.0, 2.0, 1.5, 2.5, 0.5, 0.5, 0.5, 2.0, 0.1, 1.0, 0.5, 0.5};
  void validate() const;
};

using Registry = std::array<AgentSpec, kAgentCount>;

// Defaults of the agent table; t_max0 sets the warm-start cooldown.
Registry default_registry(const AgentCosts& costs = {}, int t_max0 = 20);

struct CycleContext {
  int t = 0;
  bool stop_flag = false;
  std::size_t psm_size = 0;
  int k_ret = 3;
  int t_eff = 20;
  double err_norm_prev = 1.0;  // previous cycle's normalised residual
};

// Raw utility before the termination guard. Persistent agents report 1.
double utility(AgentId id, const HormoneVector& h, const CycleContext& ctx);

struct AgentRuntime {
  int ttl_remaining = 0;
  int cooldown_remaining = 0;
  int last_active_cycle = -1;
};

AgentRuntime initial_runtime(const AgentSpec& spec);

struct Eligibility {
  bool eligible = false;
  double utility = 0.0;
};

// Non-persistent utilities are multiplied by 1[t < T_eff] (R3D excepted: its
// indicator already covers t = T_eff).
Eligibility eligibility(const AgentSpec& spec, const AgentRuntime& runtime, const HormoneVector& h,
                        const CycleContext& ctx);

AgentRuntime tick(const AgentSpec& spec, AgentRuntime runtime, bool activated, int t);

struct HypothesisParams {
  std::size_t capacity = 32;
  double sample_ratio = 0.5;  // proposals kept if score >= ratio * best
  double prune_ratio = 0.1;   // entries dropped if score < ratio * best
  int base_proposals = 4;
  int curiosity_proposals = 8;  // extra proposals at h_cur = 1

  void validate() const;
};

struct EmissionOutcome {
  std::vector<std::pair<AgentId, CognitiveState>> deltas;
  std::vector<Violation> violations;
};

// Runs the active R1 agents in id order against the same state.
EmissionOutcome execute_emission_agents(const std::vector<AgentId>& active,
                                        const CognitiveState& s, const Output& y,
                                        const HormoneVector& h, const Task& task,
                                        HypothesisSet& hypotheses, Rng& rng,
                                        const HypothesisParams& params = {});

struct VerificationInput {
  const CognitiveState* s_t = nullptr;
  const CognitiveState* s_prev = nullptr;
  const Output* y_t = nullptr;
  const Output* y_prev = nullptr;
  const HormoneVector* h = nullptr;
  bool r2d_active = false;
  double last_consistency = 1.0;
};

struct VerificationOutcome {
  Observation observation;
  bool stop_precheck = false;
  double consistency = 1.0;
  std::vector<Violation> violations;
};

// R2A residual fields, R2B entropy fields, R2C direction and stop precheck,
// R2D consistency (held from its last active cycle when inactive).
VerificationOutcome execute_verification_agents(const VerificationInput& in, const Task& task,
                                                ObservationHistory& history,
                                                const ObservationParams& obs_params,
                                                const StoppingThresholds& thr);

// 1 - violated/total, vacuously 1 for an empty axiom base.
double consistency_score(std::size_t violated, std::size_t total);

}  // namespace hrr
