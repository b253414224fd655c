#include "hrr/rrc.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <stdexcept>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

bool contains(const std::vector<AgentId>& v, AgentId id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

void add_sorted(std::vector<AgentId>& v, AgentId id) {
  if (contains(v, id)) return;
  v.push_back(id);
  std::sort(v.begin(), v.end());
}

std::vector<AgentId> persistent_agents(const Registry& reg) {
  std::vector<AgentId> out;
  for (const AgentSpec& s : reg) {
    if (s.activation == Activation::persistent) out.push_back(s.id);
  }
  return out;
}

std::vector<std::string> violation_names(const std::vector<Violation>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const Violation& x : v) out.push_back(x.constraint);
  return out;
}

json hormones_json(const HormoneVector& h) {
  const auto a = h.to_array();
  return json(std::vector<double>(a.begin(), a.end()));
}

HormoneVector hormones_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 7) throw std::runtime_error("hormone vector must have 7 entries");
  std::array<double, 7> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return HormoneVector::from_array(a);
}

json agents_json(const std::vector<AgentId>& ids) {
  json out = json::array();
  for (AgentId id : ids) out.push_back(std::string(to_string(id)));
  return out;
}

std::vector<AgentId> agents_from(const json& j) {
  std::vector<AgentId> out;
  for (const auto& x : j) {
    const auto id = agent_from_string(x.get<std::string>());
    if (!id) throw std::runtime_error("unknown agent " + x.get<std::string>());
    out.push_back(*id);
  }
  return out;
}

json observation_json(const Observation& o) {
  return {{"err_abs", o.err_abs},
          {"err_norm", o.err_norm},
          {"err_rel", o.err_rel},
          {"err_ma", o.err_ma},
          {"entropy", o.entropy},
          {"entropy_norm", o.entropy_norm},
          {"entropy_rate", o.entropy_rate},
          {"confidence_variance", o.confidence_variance},
          {"update_norm", o.update_norm},
          {"cos_align", o.cos_align},
          {"conf_max", o.conf_max},
          {"consistency", o.consistency},
          {"output_hamming", o.output_hamming}};
}

Observation observation_from(const json& j) {
  Observation o;
  o.err_abs = j.at("err_abs").get<double>();
  o.err_norm = j.at("err_norm").get<double>();
  o.err_rel = j.at("err_rel").get<double>();
  o.err_ma = j.at("err_ma").get<double>();
  o.entropy = j.at("entropy").get<double>();
  o.entropy_norm = j.at("entropy_norm").get<double>();
  o.entropy_rate = j.at("entropy_rate").get<double>();
  o.confidence_variance = j.at("confidence_variance").get<double>();
  o.update_norm = j.at("update_norm").get<double>();
  o.cos_align = j.at("cos_align").get<double>();
  o.conf_max = j.at("conf_max").get<double>();
  o.consistency = j.at("consistency").get<double>();
  o.output_hamming = j.at("output_hamming").get<double>();
  return o;
}

json cycle_json(const CycleRecord& c) {
  return {{"t", c.t},
          {"s", c.s},
          {"y", c.y},
          {"h", hormones_json(c.h)},
          {"active", agents_json(c.active)},
          {"utilities", c.utilities},
          {"obs", observation_json(c.obs)},
          {"phi_c", c.phi_c},
          {"phi_u", c.phi_u},
          {"chi", c.chi},
          {"V", c.lyapunov},
          {"H", c.entropy},
          {"eps", c.eps},
          {"E", c.energy},
          {"T_eff", c.t_eff},
          {"B", c.budget},
          {"n_retrieved", c.n_retrieved},
          {"stop_precheck", c.stop_precheck},
          {"violations", c.violations}};
}

CycleRecord cycle_from(const json& j) {
  CycleRecord c;
  c.t = j.at("t").get<int>();
  c.s = j.at("s").get<CognitiveState>();
  c.y = j.at("y").get<Output>();
  c.h = hormones_from(j.at("h"));
  c.active = agents_from(j.at("active"));
  c.utilities = j.at("utilities").get<std::array<double, kAgentCount>>();
  c.obs = observation_from(j.at("obs"));
  c.phi_c = j.at("phi_c").get<double>();
  c.phi_u = j.at("phi_u").get<double>();
  c.chi = j.at("chi").get<double>();
  c.lyapunov = j.at("V").get<double>();
  c.entropy = j.at("H").get<double>();
  c.eps = j.at("eps").get<double>();
  c.energy = j.at("E").get<double>();
  c.t_eff = j.at("T_eff").get<int>();
  c.budget = j.at("B").get<double>();
  c.n_retrieved = j.at("n_retrieved").get<std::size_t>();
  c.stop_precheck = j.at("stop_precheck").get<bool>();
  c.violations = j.at("violations").get<std::vector<std::string>>();
  return c;
}

StopReason reason_from(const std::string& s) {
  if (s == "criterion") return StopReason::criterion;
  if (s == "budget") return StopReason::budget;
  throw std::runtime_error("unknown stop reason " + s);
}

}  // namespace

void BudgetParams::validate() const {
  require(t_max0 >= 1, "T_max0 must be >= 1");
  require(t_min >= 1 && t_min <= t_max0, "T_min must lie in [1, T_max0]");
  require(in_unit(beta_e), "beta_E must lie in [0,1]");
  require(in_unit(kappa_u), "kappa_u must lie in [0,1]");
}

void EnergyModel::validate() const {
  require(c_base >= 0.0 && c_iter >= 0.0 && c_mem >= 0.0, "energy costs must be >= 0");
}

int effective_budget(const HormoneVector& h, const BudgetParams& p) {
  const double base = p.t_max0 * (1.0 - p.beta_e * h.energy);
  const double extension = p.t_min + p.kappa_u * h.confusion * (p.t_max0 - p.t_min);
  const int t = static_cast<int>(std::ceil(std::max(base, extension) - 1e-12));
  return std::max(t, p.t_min);
}

double cycle_energy(std::size_t n_active, std::size_t n_retrieved, const EnergyModel& m) {
  return m.c_base + m.c_iter * static_cast<double>(n_active) +
         m.c_mem * static_cast<double>(n_retrieved);
}

double step_gain(double h_u, double eta0) { return eta0 * (0.5 + 0.5 * h_u); }

CognitiveState iterate_state(const CognitiveState& s,
                             const std::vector<std::pair<AgentId, CognitiveState>>& deltas,
                             const HormoneVector& h, double eta0) {
  if (deltas.empty()) return s;
  const double eta = step_gain(h.confusion, eta0) / static_cast<double>(deltas.size());
  CognitiveState next = s;
  for (const auto& [id, d] : deltas) {
    if (d.size() != s.size()) throw TaskError("delta dimension mismatch");
    for (std::size_t i = 0; i < s.size(); ++i) next[i] += eta * d[i];
  }
  return clip_unit(std::move(next));
}

void InheritedSchedule::validate() const {
  if (confidence) require(in_unit(*confidence), "inherited confidence must lie in [0,1]");
  if (alertness) require(in_unit(*alertness), "inherited alertness must lie in [0,1]");
  require(in_unit(inhibition), "inherited inhibition must lie in [0,1]");
  require(in_unit(curiosity), "inherited curiosity must lie in [0,1]");
  require(in_unit(energy), "inherited energy must lie in [0,1]");
  require(std::isfinite(energy_slope), "energy_slope must be finite");
}

HormoneVector InheritedSchedule::at(int t, const ContextSignature& sig) const {
  HormoneVector h;
  h.confidence = std::clamp(confidence.value_or(sig.confidence), 0.0, 1.0);
  h.alertness = std::clamp(alertness.value_or(sig.alertness), 0.0, 1.0);
  h.inhibition = inhibition;
  h.curiosity = curiosity;
  h.energy = std::clamp(energy + energy_slope * t, 0.0, 1.0);
  return h;
}

void EpisodeConfig::validate() const {
  hormones.validate();
  weights.validate();
  stopping.validate();
  budget.validate();
  energy.validate();
  retrieval.validate();
  observation.validate();
  primal_dual.validate();
  hypotheses.validate();
  costs.validate();
  inherited.validate();
  require(eta0 > 0.0 && eta0 <= 1.0, "eta0 must lie in (0,1]");
  require(b_max > 0.0, "B_max must be > 0");
  require(in_unit(beta_b), "beta_B must lie in [0,1]");
  require(in_unit(rho_u_gate), "rho_u gate must lie in [0,1]");
}

std::string_view to_string(StopReason r) {
  return r == StopReason::criterion ? "criterion" : "budget";
}

EpisodeTrace run_episode(const Task& task, const EpisodeConfig& config, EngramStore& store,
                         std::uint64_t seed, const EpisodeOptions& options) {
  config.validate();
  const Registry registry = default_registry(config.costs, config.budget.t_max0);
  const std::vector<AgentId> persistent = persistent_agents(registry);
  const ContextSignature signature = task.context();

  HormonalEngine engine(config.hormones, mix_seed(seed, 1));
  Rng rng(mix_seed(seed, 2));
  engine.set_inherited(config.inherited.at(0, signature));

  std::array<AgentRuntime, kAgentCount> runtime{};
  for (const AgentSpec& spec : registry) runtime[index_of(spec.id)] = initial_runtime(spec);

  EpisodeTrace trace;
  trace.task = std::string(task.name());
  trace.seed = seed;
  trace.warmup = options.warmup;

  const HormoneVector h0 = engine.state();
  const HormoneContext context0 = h0.to_array();

  // t = 0: encoding, optional warm start.
  CognitiveState s = task.encode();
  std::vector<AgentId> active0 = persistent;
  std::size_t retrieved0 = 0;
  CycleContext ctx0;
  ctx0.t = 0;
  ctx0.psm_size = store.size();
  ctx0.k_ret = config.retrieval.k_ret;
  ctx0.t_eff = effective_budget(h0, config.budget);
  if (options.warm_start && !options.warmup && utility(AgentId::R3C, h0, ctx0) > 0.0) {
    const auto retrieved = store.retrieve(context0, config.retrieval);
    retrieved0 = retrieved.size();
    add_sorted(active0, AgentId::R3B);
    if (!retrieved.empty()) {
      s = task.project(warm_start(retrieved));
      trace.warm_flag = true;
      add_sorted(active0, AgentId::R3C);
      runtime[index_of(AgentId::R3C)] =
          tick(registry[index_of(AgentId::R3C)], runtime[index_of(AgentId::R3C)], true, 0);
    }
  }
  Output y = task.decode(s);
  double consistency = 1.0;

  CycleRecord rec0;
  rec0.t = 0;
  rec0.s = s;
  rec0.y = y;
  rec0.h = h0;
  rec0.active = active0;
  for (const AgentSpec& spec : registry) rec0.utilities[index_of(spec.id)] = utility(spec.id, h0, ctx0);
  rec0.obs = initial_observation(task.distribution(s, y), consistency);
  rec0.entropy = rec0.obs.entropy;
  rec0.eps = rec0.obs.err_abs;
  rec0.energy = cycle_energy(active0.size(), retrieved0, config.energy);
  rec0.t_eff = ctx0.t_eff;
  rec0.budget = cycle_budget(config.b_max, h0.energy, config.beta_b);
  rec0.n_retrieved = retrieved0;
  trace.cycles.push_back(rec0);
  trace.total_energy = rec0.energy;

  ObservationHistory history;
  HypothesisSet hypotheses(config.hypotheses.capacity);
  std::vector<AgentId> ever_active = active0;
  int t_eff_prev = ctx0.t_eff;
  Observation obs_prev = rec0.obs;
  std::vector<CognitiveState> states;

  for (int t = 1;; ++t) {
    engine.set_inherited(config.inherited.at(t, signature));
    const double phi_c =
        phi_clarity(obs_prev.entropy_norm, obs_prev.err_norm, obs_prev.cos_align, config.weights);
    const double phi_u =
        phi_confusion(obs_prev.entropy_norm, obs_prev.err_norm, obs_prev.conf_max, config.weights);
    const double chi =
        std::clamp(static_cast<double>(t) / static_cast<double>(t_eff_prev), 0.0, 1.0);
    const bool damping = t >= config.rho_u_gate * t_eff_prev;
    const HormoneVector h = engine.advance({phi_c, phi_u}, chi, damping);
    const int t_eff = effective_budget(h, config.budget);
    const double budget = cycle_budget(config.b_max, h.energy, config.beta_b);

    CycleContext ctx;
    ctx.t = t;
    ctx.psm_size = store.size();
    ctx.k_ret = config.retrieval.k_ret;
    ctx.t_eff = t_eff;
    ctx.err_norm_prev = obs_prev.err_norm;

    CycleRecord rec;
    rec.t = t;
    rec.h = h;
    rec.phi_c = phi_c;
    rec.phi_u = phi_u;
    rec.chi = chi;
    rec.t_eff = t_eff;
    rec.budget = budget;

    const bool forced_pass = options.single_pass;
    if (t >= t_eff && !forced_pass) {
      ctx.stop_flag = false;
      for (const AgentSpec& spec : registry) rec.utilities[index_of(spec.id)] = utility(spec.id, h, ctx);
      rec.s = s;
      rec.y = y;
      rec.active = persistent;
      add_sorted(rec.active, AgentId::R3D);
      rec.obs = obs_prev;
      rec.entropy = obs_prev.entropy;
      rec.eps = 0.0;
      rec.energy = cycle_energy(rec.active.size(), 0, config.energy);
      trace.total_energy += rec.energy;
      trace.cycles.push_back(std::move(rec));
      trace.t_star = t;
      trace.reason = StopReason::budget;
      break;
    }

    // Selection among the utility-activated agents.
    SelectionProblem problem;
    problem.budget = budget;
    for (const AgentSpec& spec : registry) {
      const Eligibility e = eligibility(spec, runtime[index_of(spec.id)], h, ctx);
      rec.utilities[index_of(spec.id)] = e.utility;
      if (spec.activation != Activation::utility) continue;
      if (forced_pass || e.eligible) problem.candidates.push_back({index_of(spec.id), e.utility, spec.cost});
    }
    std::vector<AgentId> chosen;
    if (forced_pass) {
      for (const Candidate& c : problem.candidates) chosen.push_back(static_cast<AgentId>(c.id));
    } else if (!problem.candidates.empty()) {
      const SelectionResult sel = config.selection == SelectionMode::exact
                                      ? solve_exact(problem)
                                      : solve_primal_dual(problem, config.primal_dual);
      for (int id : sel.chosen) chosen.push_back(static_cast<AgentId>(id));
    }
    for (const AgentSpec& spec : registry) {
      if (spec.activation != Activation::utility) continue;
      runtime[index_of(spec.id)] =
          tick(spec, runtime[index_of(spec.id)], contains(chosen, spec.id), t);
    }
    std::vector<AgentId> active = persistent;
    for (AgentId id : chosen) add_sorted(active, id);

    // Emission layer and state update.
    EmissionOutcome emitted =
        execute_emission_agents(active, s, y, h, task, hypotheses, rng, config.hypotheses);
    CognitiveState s_next = iterate_state(s, emitted.deltas, h, config.eta0);
    Output y_next = task.decode(s_next);

    std::size_t n_retrieved = 0;
    if (contains(active, AgentId::R3B)) {
      n_retrieved = store.retrieve(h.to_array(), config.retrieval).size();
    }

    VerificationInput in;
    in.s_t = &s_next;
    in.s_prev = &s;
    in.y_t = &y_next;
    in.y_prev = &y;
    in.h = &h;
    in.r2d_active = contains(active, AgentId::R2D);
    in.last_consistency = consistency;
    VerificationOutcome verified = execute_verification_agents(
        in, task, history, config.observation, config.stopping);
    consistency = verified.consistency;

    const bool stop = verified.stop_precheck;
    if (stop || forced_pass) add_sorted(active, AgentId::R3D);
    for (AgentId id : active) add_sorted(ever_active, id);

    rec.s = s_next;
    rec.y = y_next;
    rec.active = active;
    rec.obs = verified.observation;
    rec.entropy = rec.obs.entropy;
    rec.eps = rec.obs.err_abs;
    rec.energy = cycle_energy(active.size(), n_retrieved, config.energy);
    rec.n_retrieved = n_retrieved;
    rec.stop_precheck = verified.stop_precheck;
    rec.violations = violation_names(emitted.violations);
    for (const auto& v : verified.violations) rec.violations.push_back(v.constraint);
    trace.total_energy += rec.energy;
    trace.cycles.push_back(std::move(rec));
    states.push_back(s_next);

    s = std::move(s_next);
    y = std::move(y_next);
    obs_prev = trace.cycles.back().obs;
    t_eff_prev = t_eff;

    if (stop || forced_pass) {
      trace.t_star = t;
      trace.reason = stop ? StopReason::criterion : StopReason::budget;
      if (stop && should_write(y, options.previous_output, config.retrieval.eps_sig)) {
        std::array<bool, kAgentCount> activation{};
        for (AgentId id : ever_active) activation[index_of(id)] = true;
        const double e_max = cycle_energy(kAgentCount, config.retrieval.k_ret, config.energy) *
                             config.budget.t_max0;
        const double beta = std::clamp(trace.total_energy / e_max, 0.0, 1.0);
        store.insert(make_engram(context0, activation, trace.cycles.front().s, states, y, beta),
                     config.retrieval.m_max);
        trace.engram_written = true;
      }
      break;
    }
  }

  trace.correct = task.is_correct(trace.cycles.back().y);

  // Lyapunov profile against the closed-loop equilibrium of the terminal
  // observation, the fixed point the regulator settles to once reasoning is done.
  const CycleRecord& last = trace.cycles.back();
  const Signals terminal{
      phi_clarity(last.obs.entropy_norm, last.obs.err_norm, last.obs.cos_align, config.weights),
      phi_confusion(last.obs.entropy_norm, last.obs.err_norm, last.obs.conf_max, config.weights)};
  trace.h_star = estimate_equilibrium(config.hormones, terminal, last.chi,
                                      config.inherited.at(0, signature));
  for (CycleRecord& c : trace.cycles) c.lyapunov = lyapunov(c.h, trace.h_star, config.hormones);
  return trace;
}

void write_trace(std::ostream& os, const EpisodeTrace& trace) {
  for (const CycleRecord& c : trace.cycles) os << cycle_json(c).dump() << '\n';
  json summary = {{"summary", true},
                  {"task", trace.task},
                  {"seed", trace.seed},
                  {"episode", trace.episode},
                  {"warmup", trace.warmup},
                  {"t_star", trace.t_star},
                  {"stop_reason", std::string(to_string(trace.reason))},
                  {"total_energy", trace.total_energy},
                  {"warm_flag", trace.warm_flag},
                  {"correct", trace.correct},
                  {"engram_written", trace.engram_written},
                  {"h_star", {trace.h_star.clarity, trace.h_star.confusion}}};
  os << summary.dump() << '\n';
}

EpisodeTrace read_trace(std::istream& is) {
  EpisodeTrace trace;
  std::string line;
  int lineno = 0;
  bool have_summary = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (j.value("summary", false)) {
        trace.task = j.at("task").get<std::string>();
        trace.seed = j.at("seed").get<std::uint64_t>();
        trace.episode = j.at("episode").get<int>();
        trace.warmup = j.at("warmup").get<bool>();
        trace.t_star = j.at("t_star").get<int>();
        trace.reason = reason_from(j.at("stop_reason").get<std::string>());
        trace.total_energy = j.at("total_energy").get<double>();
        trace.warm_flag = j.at("warm_flag").get<bool>();
        trace.correct = j.at("correct").get<bool>();
        trace.engram_written = j.at("engram_written").get<bool>();
        trace.h_star = {j.at("h_star").at(0).get<double>(), j.at("h_star").at(1).get<double>()};
        have_summary = true;
        break;
      }
      trace.cycles.push_back(cycle_from(j));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_summary) throw std::runtime_error("trace has no summary line");
  return trace;
}

DecisionRecord decision_record(const EpisodeTrace& trace) {
  DecisionRecord r;
  for (const CycleRecord& c : trace.cycles) {
    r.hormones.push_back({c.h.clarity, c.h.confusion});
    r.agents.push_back(c.active);
    r.states.push_back(c.s);
    r.outputs.push_back(c.y);
    r.convergence.push_back(c.eps);
  }
  r.t_star = trace.t_star;
  r.reason = trace.reason;
  r.total_energy = trace.total_energy;
  return r;
}

std::string serialize(const DecisionRecord& r) {
  json agents = json::array();
  for (const auto& a : r.agents) agents.push_back(agents_json(a));
  const json j = {{"hormones", r.hormones},   {"agents", agents},
                  {"states", r.states},       {"outputs", r.outputs},
                  {"convergence", r.convergence}, {"t_star", r.t_star},
                  {"stop_reason", std::string(to_string(r.reason))},
                  {"total_energy", r.total_energy}};
  return j.dump();
}

DecisionRecord parse_decision_record(const std::string& text) {
  const json j = json::parse(text);
  DecisionRecord r;
  r.hormones = j.at("hormones").get<std::vector<std::array<double, 2>>>();
  for (const auto& a : j.at("agents")) r.agents.push_back(agents_from(a));
  r.states = j.at("states").get<std::vector<CognitiveState>>();
  r.outputs = j.at("outputs").get<std::vector<Output>>();
  r.convergence = j.at("convergence").get<std::vector<double>>();
  r.t_star = j.at("t_star").get<int>();
  r.reason = reason_from(j.at("stop_reason").get<std::string>());
  r.total_energy = j.at("total_energy").get<double>();
  return r;
}

}  // namespace hrr
