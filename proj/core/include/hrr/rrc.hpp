#pragma once

// The recursive reasoning cycle: per-cycle hormone update, budget, agent
// selection, state iteration, verification, energy and stopping.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hrr/agents.hpp"
#include "hrr/engrams.hpp"
#include "hrr/hormones.hpp"
#include "hrr/observe.hpp"
#include "hrr/select.hpp"
#include "hrr/stop.hpp"
#include "hrr/task.hpp"

namespace hrr {

struct BudgetParams {
  int t_max0 = 20;
  double beta_e = 0.80;
  double kappa_u = 0.80;
  int t_min = 1;

  void validate() const;
};

struct EnergyModel {
  double c_base = 1.0;
  double c_iter = 0.5;
  double c_mem = 0.2;

  void validate() const;
};

// ceil(max(t_max0 (1 - beta_e h_ene), t_min + kappa_u h_u (t_max0 - t_min))), floored at t_min.
int effective_budget(const HormoneVector& h, const BudgetParams& p);

double cycle_energy(std::size_t n_active, std::size_t n_retrieved, const EnergyModel& m);

// eta(h) = eta0 (0.5 + 0.5 h_u).
double step_gain(double h_u, double eta0);

// clip(s + eta(h) * mean of the R1 deltas); s unchanged when there are none.
CognitiveState iterate_state(const CognitiveState& s,
                             const std::vector<std::pair<AgentId, CognitiveState>>& deltas,
                             const HormoneVector& h, double eta0);

// Exogenous hormones per cycle. Unset confidence/alertness come from the
// task's context signature; energy follows energy + energy_slope * t.
struct InheritedSchedule {
  std::optional<double> confidence;
  std::optional<double> alertness;
  double inhibition = 0.5;
  double curiosity = 0.2;
  double energy = 0.0;
  double energy_slope = 0.0;

  void validate() const;
  HormoneVector at(int t, const ContextSignature& sig) const;
};

enum class SelectionMode { exact, primal_dual };

struct EpisodeConfig {
  HormoneParams hormones;
  EmissionWeights weights;
  StoppingThresholds stopping;
  BudgetParams budget;
  EnergyModel energy;
  RetrievalParams retrieval;
  ObservationParams observation;
  PrimalDualParams primal_dual;
  HypothesisParams hypotheses;
  AgentCosts costs;
  InheritedSchedule inherited;
  SelectionMode selection = SelectionMode::exact;
  double eta0 = 0.3;
  double b_max = 10.0;
  double beta_b = 0.80;
  double rho_u_gate = 0.8;  // rho_u is active once t >= gate * T_eff

  // Domain checks only; gates are separate.
  void validate() const;
};

struct EpisodeOptions {
  bool warm_start = true;
  bool warmup = false;
  // Frugality baseline: one cycle with every utility agent forced on.
  bool single_pass = false;
  const Output* previous_output = nullptr;  // for the engram write test
};

enum class StopReason { criterion, budget };

std::string_view to_string(StopReason r);

struct CycleRecord {
  int t = 0;
  CognitiveState s;
  Output y;
  HormoneVector h;
  std::vector<AgentId> active;
  std::array<double, kAgentCount> utilities{};
  Observation obs;
  double phi_c = 0.0;  // signals derived from the previous observation
  double phi_u = 0.0;
  double chi = 0.0;
  double lyapunov = 0.0;
  double entropy = 0.0;
  double eps = 0.0;
  double energy = 0.0;
  int t_eff = 0;
  double budget = 0.0;
  std::size_t n_retrieved = 0;
  bool stop_precheck = false;
  std::vector<std::string> violations;

  friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

struct EpisodeTrace {
  std::string task;
  std::uint64_t seed = 0;
  int episode = 0;
  bool warmup = false;
  std::vector<CycleRecord> cycles;  // t = 0 .. t*
  int t_star = 0;
  StopReason reason = StopReason::budget;
  double total_energy = 0.0;
  bool warm_flag = false;
  bool correct = false;
  bool engram_written = false;
  Equilibrium h_star;

  friend bool operator==(const EpisodeTrace&, const EpisodeTrace&) = default;
};

EpisodeTrace run_episode(const Task& task, const EpisodeConfig& config, EngramStore& store,
                         std::uint64_t seed, const EpisodeOptions& options = {});

// One JSON object per cycle, then a summary object ("summary": true).
void write_trace(std::ostream& os, const EpisodeTrace& trace);
EpisodeTrace read_trace(std::istream& is);

// Explainability record: every field copied verbatim from the trace.
struct DecisionRecord {
  std::vector<std::array<double, 2>> hormones;  // (h_c, h_u) per cycle
  std::vector<std::vector<AgentId>> agents;
  std::vector<CognitiveState> states;
  std::vector<Output> outputs;
  std::vector<double> convergence;  // eps per cycle
  int t_star = 0;
  StopReason reason = StopReason::budget;
  double total_energy = 0.0;

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

DecisionRecord decision_record(const EpisodeTrace& trace);
std::string serialize(const DecisionRecord& r);
DecisionRecord parse_decision_record(const std::string& text);

}  // namespace hrr
