#include "hrr/agents.hpp"

#include <algorithm>
#include <cmath>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

constexpr std::array<std::string_view, kAgentCount> kNames{
    "R1A", "R1B", "R1C", "R1D", "R2A", "R2B", "R2C", "R2D", "R3A", "R3B", "R3C", "R3D"};

}  // namespace

std::string_view to_string(AgentId id) { return kNames[static_cast<std::size_t>(index_of(id))]; }

std::optional<AgentId> agent_from_string(std::string_view name) {
  for (AgentId id : kAllAgents) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

void AgentCosts::validate() const {
  for (double c : value) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("agent costs must be finite and > 0");
  }
}

Registry default_registry(const AgentCosts& costs, int t_max0) {
  using K = AgentKind;
  using A = Activation;
  Registry r{{
      {AgentId::R1A, K::emission, A::utility, 0.25, 0.0, kPersistentTtl, 0},
      {AgentId::R1B, K::emission, A::utility, 0.35, 0.0, 3, 2},
      {AgentId::R1C, K::emission, A::utility, 0.30, 0.0, 2, 1},
      {AgentId::R1D, K::emission, A::utility, 0.40, 0.0, 3, 2},
      {AgentId::R2A, K::verification, A::persistent, 0.0, 0.0, kPersistentTtl, 0},
      {AgentId::R2B, K::verification, A::persistent, 0.0, 0.0, kPersistentTtl, 0},
      {AgentId::R2C, K::verification, A::persistent, 0.30, 0.0, kPersistentTtl, 0},
      {AgentId::R2D, K::verification, A::utility, 0.35, 0.0, 5, 2},
      {AgentId::R3A, K::governance, A::persistent, 0.0, 0.0, kPersistentTtl, 0},
      {AgentId::R3B, K::governance, A::utility, 0.25, 0.0, 2, 1},
      {AgentId::R3C, K::governance, A::event, 0.0, 0.0, 1, t_max0},
      {AgentId::R3D, K::governance, A::event, 0.0, 0.0, 1, 0},
  }};
  for (std::size_t i = 0; i < r.size(); ++i) r[i].cost = costs.value[i];
  return r;
}

double utility(AgentId id, const HormoneVector& h, const CycleContext& ctx) {
  switch (id) {
    case AgentId::R1A:
      return 0.6 * h.confusion + 0.4 * (1.0 - h.clarity);
    case AgentId::R1B:
      return 0.5 * h.confusion + 0.3 * h.curiosity + 0.2 * (1.0 - h.clarity);
    case AgentId::R1C:
      return 0.7 * h.confusion - 0.3 * h.energy;
    case AgentId::R1D:
      return 0.6 * h.confusion + 0.2 * h.alertness;
    case AgentId::R2C:
      return 0.5 * h.clarity + 0.3 * (1.0 - h.confusion) + 0.2 * (1.0 - ctx.err_norm_prev);
    case AgentId::R2D:
      return 0.6 * h.confusion + 0.3 * h.alertness;
    case AgentId::R3B:
      return 0.5 * h.clarity + 0.3 * (1.0 - h.confusion) + 0.2 * (1.0 - h.energy);
    case AgentId::R3C:
      return (ctx.t == 0 && ctx.psm_size >= static_cast<std::size_t>(ctx.k_ret)) ? 1.0 : 0.0;
    case AgentId::R3D:
      return (ctx.stop_flag || ctx.t >= ctx.t_eff) ? 1.0 : 0.0;
    case AgentId::R2A:
    case AgentId::R2B:
    case AgentId::R3A:
      return 1.0;
  }
  return 0.0;
}

AgentRuntime initial_runtime(const AgentSpec& spec) {
  AgentRuntime r;
  r.ttl_remaining = spec.ttl;
  return r;
}

Eligibility eligibility(const AgentSpec& spec, const AgentRuntime& runtime, const HormoneVector& h,
                        const CycleContext& ctx) {
  Eligibility e;
  double u = utility(spec.id, h, ctx);
  if (spec.activation == Activation::persistent) {
    e.eligible = true;
    e.utility = spec.id == AgentId::R2C ? u : 1.0;
    return e;
  }
  if (spec.id != AgentId::R3D && ctx.t >= ctx.t_eff) u = 0.0;
  e.utility = u;
  if (runtime.cooldown_remaining > 0) return e;
  e.eligible = u > spec.threshold;
  return e;
}

AgentRuntime tick(const AgentSpec& spec, AgentRuntime runtime, bool activated, int t) {
  if (spec.ttl == kPersistentTtl) {
    if (activated) runtime.last_active_cycle = t;
    return runtime;
  }
  if (activated) {
    runtime.last_active_cycle = t;
    runtime.ttl_remaining = std::max(0, runtime.ttl_remaining - 1);
    if (runtime.ttl_remaining == 0) {
      runtime.cooldown_remaining = spec.cooldown;
      runtime.ttl_remaining = spec.ttl;
    }
    return runtime;
  }
  if (runtime.cooldown_remaining > 0) {
    --runtime.cooldown_remaining;
  } else {
    runtime.ttl_remaining = spec.ttl;
  }
  return runtime;
}

void HypothesisParams::validate() const {
  if (capacity < 1) throw ConfigError("hypothesis capacity must be >= 1");
  if (!(sample_ratio >= 0.0 && sample_ratio <= 1.0)) throw ConfigError("sample_ratio in [0,1]");
  if (!(prune_ratio >= 0.0 && prune_ratio <= 1.0)) throw ConfigError("prune_ratio in [0,1]");
  if (base_proposals < 0 || curiosity_proposals < 0) throw ConfigError("proposal counts >= 0");
}

EmissionOutcome execute_emission_agents(const std::vector<AgentId>& active,
                                        const CognitiveState& s, const Output& y,
                                        const HormoneVector& h, const Task& task,
                                        HypothesisSet& hypotheses, Rng& rng,
                                        const HypothesisParams& params) {
  EmissionOutcome out;
  auto is_active = [&](AgentId id) {
    return std::find(active.begin(), active.end(), id) != active.end();
  };
  auto record = [&](AgentId id) {
    AgentDelta d = task.delta(id, s, y, hypotheses);
    out.violations.insert(out.violations.end(), d.violations.begin(), d.violations.end());
    out.deltas.emplace_back(id, std::move(d.delta));
  };

  if (is_active(AgentId::R1A)) record(AgentId::R1A);

  if (is_active(AgentId::R1B)) {
    const int count = params.base_proposals +
                      static_cast<int>(std::lround(params.curiosity_proposals * h.curiosity));
    std::vector<Hypothesis> proposals = task.propose(s, count, rng);
    double best = hypotheses.best() ? hypotheses.best()->score : 0.0;
    for (const Hypothesis& p : proposals) best = std::max(best, p.score);
    for (Hypothesis& p : proposals) {
      if (p.score >= params.sample_ratio * best) hypotheses.add(std::move(p));
    }
    hypotheses.prune_below(params.prune_ratio * best);
    record(AgentId::R1B);
  }

  if (is_active(AgentId::R1C)) record(AgentId::R1C);

  if (is_active(AgentId::R1D)) {
    if (!hypotheses.empty()) {
      const Hypothesis top = *hypotheses.best();
      std::vector<bool> keep;
      keep.reserve(hypotheses.size());
      for (const Hypothesis& cand : hypotheses.entries()) keep.push_back(task.consistent(cand.state));
      hypotheses.keep_only(keep);
      if (hypotheses.empty()) hypotheses.add(top);
    }
    record(AgentId::R1D);
  }
  return out;
}

double consistency_score(std::size_t violated, std::size_t total) {
  if (total == 0) return 1.0;
  return 1.0 - static_cast<double>(std::min(violated, total)) / static_cast<double>(total);
}

VerificationOutcome execute_verification_agents(const VerificationInput& in, const Task& task,
                                                ObservationHistory& history,
                                                const ObservationParams& obs_params,
                                                const StoppingThresholds& thr) {
  VerificationOutcome out;
  out.consistency = in.last_consistency;
  if (in.r2d_active) {
    out.violations = task.axioms(*in.y_t);
    out.consistency = consistency_score(out.violations.size(), task.axiom_count());
  }
  const OutputDistribution p = task.distribution(*in.s_t, *in.y_t);
  out.observation = build_observation(*in.s_t, *in.s_prev, p, *in.y_t, *in.y_prev,
                                      out.consistency, history, obs_params);
  out.stop_precheck = should_stop(*in.s_t, *in.s_prev, *in.h, thr);
  return out;
}

}  // namespace hrr
