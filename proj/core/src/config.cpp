#include "hrr/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

using nlohmann::json;

enum class Kind { real, integer, boolean };

struct Field {
  const char* key;
  Kind kind;
  double (*get)(const RunConfig&);
  void (*set)(RunConfig&, double);
};

#define HRR_REAL(key, expr)                                                   \
  Field {                                                                     \
    key, Kind::real, [](const RunConfig& c) -> double { return c.expr; },     \
        [](RunConfig& c, double v) { c.expr = v; }                            \
  }
#define HRR_INT(key, expr, type)                                              \
  Field {                                                                     \
    key, Kind::integer,                                                       \
        [](const RunConfig& c) -> double { return static_cast<double>(c.expr); }, \
        [](RunConfig& c, double v) { c.expr = static_cast<type>(v); }         \
  }
#define HRR_BOOL(key, expr)                                                   \
  Field {                                                                     \
    key, Kind::boolean, [](const RunConfig& c) -> double { return c.expr ? 1.0 : 0.0; }, \
        [](RunConfig& c, double v) { c.expr = v != 0.0; }                     \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f{
      HRR_REAL("tau_c", episode.hormones.clarity.tau),
      HRR_REAL("tau_u", episode.hormones.confusion.tau),
      HRR_REAL("lambda_c", episode.hormones.clarity.lambda),
      HRR_REAL("lambda_u", episode.hormones.confusion.lambda),
      HRR_REAL("gamma_cu", episode.hormones.gamma_cu),
      HRR_REAL("gamma_uc", episode.hormones.gamma_uc),
      HRR_REAL("gamma_cur_u", episode.hormones.gamma_cur_u),
      HRR_REAL("gamma_inh_c", episode.hormones.gamma_inh_c),
      HRR_INT("delta_c", episode.hormones.clarity.delay, int),
      HRR_INT("delta_u", episode.hormones.confusion.delay, int),
      HRR_REAL("rho_c", episode.hormones.clarity.rho),
      HRR_REAL("rho_u", episode.hormones.confusion.rho),
      HRR_REAL("sigma_eta_c", episode.hormones.clarity.sigma_eta),
      HRR_REAL("sigma_eta_u", episode.hormones.confusion.sigma_eta),
      HRR_REAL("a_c", episode.hormones.clarity.gain),
      HRR_REAL("a_u", episode.hormones.confusion.gain),
      HRR_REAL("b_c", episode.hormones.clarity.bias),
      HRR_REAL("b_u", episode.hormones.confusion.bias),
      HRR_REAL("amp_c", episode.hormones.clarity.amplitude),
      HRR_REAL("amp_u", episode.hormones.confusion.amplitude),
      HRR_REAL("dt", episode.hormones.dt),
      HRR_INT("substeps", episode.hormones.substeps, int),
      HRR_REAL("alpha_u", episode.weights.alpha_u),
      HRR_REAL("beta_u", episode.weights.beta_u),
      HRR_REAL("gamma_u", episode.weights.gamma_u),
      HRR_REAL("alpha_c", episode.weights.alpha_c),
      HRR_REAL("beta_c", episode.weights.beta_c),
      HRR_REAL("gamma_c", episode.weights.gamma_c),
      HRR_REAL("eps_s", episode.stopping.eps_s),
      HRR_REAL("theta_c", episode.stopping.theta_c),
      HRR_REAL("theta_u", episode.stopping.theta_u),
      HRR_INT("t_max0", episode.budget.t_max0, int),
      HRR_REAL("beta_e", episode.budget.beta_e),
      HRR_REAL("kappa_u", episode.budget.kappa_u),
      HRR_INT("t_min", episode.budget.t_min, int),
      HRR_REAL("c_base", episode.energy.c_base),
      HRR_REAL("c_iter", episode.energy.c_iter),
      HRR_REAL("c_mem", episode.energy.c_mem),
      HRR_REAL("alpha", episode.retrieval.alpha),
      HRR_INT("k_ret", episode.retrieval.k_ret, int),
      HRR_REAL("theta_ret", episode.retrieval.theta_ret),
      HRR_INT("m_max", episode.retrieval.m_max, std::size_t),
      HRR_REAL("eps_sig", episode.retrieval.eps_sig),
      HRR_REAL("alpha_x", episode.primal_dual.alpha_x),
      HRR_REAL("alpha_mu", episode.primal_dual.alpha_mu),
      HRR_REAL("mu_max", episode.primal_dual.mu_max),
      HRR_INT("pd_steps", episode.primal_dual.steps, int),
      HRR_REAL("b_max", episode.b_max),
      HRR_REAL("beta_b", episode.beta_b),
      HRR_REAL("eta0", episode.eta0),
      HRR_REAL("rho_u_gate", episode.rho_u_gate),
      HRR_INT("hypothesis_capacity", episode.hypotheses.capacity, std::size_t),
      HRR_REAL("sample_ratio", episode.hypotheses.sample_ratio),
      HRR_REAL("prune_ratio", episode.hypotheses.prune_ratio),
      HRR_INT("base_proposals", episode.hypotheses.base_proposals, int),
      HRR_INT("curiosity_proposals", episode.hypotheses.curiosity_proposals, int),
      HRR_INT("window", episode.observation.window, int),
      HRR_REAL("ema_decay", episode.observation.ema_decay),
      HRR_INT("n_episodes", n_episodes, int),
      HRR_INT("warmup_episodes", warmup_episodes, int),
      HRR_INT("n_seeds", n_seeds, int),
      HRR_INT("seed", seed, std::uint64_t),
      HRR_BOOL("warm_start_enabled", warm_start_enabled),
      HRR_BOOL("write_traces", write_traces),
  };
  return f;
}

#undef HRR_REAL
#undef HRR_INT
#undef HRR_BOOL

const Field* find_field(const std::string& key) {
  for (const Field& f : fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

void set_field(RunConfig& c, const Field& f, const json& v) {
  const std::string key = f.key;
  switch (f.kind) {
    case Kind::real:
      if (!v.is_number()) throw ConfigError(key + ": expected a number");
      f.set(c, v.get<double>());
      return;
    case Kind::integer:
      if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
      if (v.is_number_unsigned()) {
        f.set(c, static_cast<double>(v.get<std::uint64_t>()));
      } else {
        const auto i = v.get<std::int64_t>();
        if (i < 0) throw ConfigError(key + ": expected a non-negative integer");
        f.set(c, static_cast<double>(i));
      }
      return;
    case Kind::boolean:
      if (!v.is_boolean()) throw ConfigError(key + ": expected true or false");
      f.set(c, v.get<bool>() ? 1.0 : 0.0);
      return;
  }
}

std::optional<double> optional_unit(const json& v, const std::string& key) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ConfigError("inherited." + key + ": expected a number or null");
  return v.get<double>();
}

void parse_inherited(RunConfig& c, const json& doc) {
  if (!doc.is_object()) throw ConfigError("inherited: expected an object");
  InheritedSchedule& s = c.episode.inherited;
  for (const auto& [key, v] : doc.items()) {
    if (key == "confidence") {
      s.confidence = optional_unit(v, key);
    } else if (key == "alertness") {
      s.alertness = optional_unit(v, key);
    } else if (key == "inhibition" || key == "curiosity" || key == "energy" ||
               key == "energy_slope") {
      if (!v.is_number()) throw ConfigError("inherited." + key + ": expected a number");
      const double x = v.get<double>();
      if (key == "inhibition") s.inhibition = x;
      if (key == "curiosity") s.curiosity = x;
      if (key == "energy") s.energy = x;
      if (key == "energy_slope") s.energy_slope = x;
    } else {
      throw ConfigError("unknown key inherited." + key);
    }
  }
}

void parse_costs(RunConfig& c, const json& doc) {
  if (!doc.is_object()) throw ConfigError("costs: expected an object");
  for (const auto& [key, v] : doc.items()) {
    const auto id = agent_from_string(key);
    if (!id) throw ConfigError("unknown key costs." + key);
    if (!v.is_number()) throw ConfigError("costs." + key + ": expected a number");
    c.episode.costs.value[index_of(*id)] = v.get<double>();
  }
}

}  // namespace

void RunConfig::validate() const {
  episode.validate();
  if (n_episodes < 1) throw ConfigError("n_episodes must be >= 1");
  if (warmup_episodes < 0 || warmup_episodes >= n_episodes) {
    throw ConfigError("warmup_episodes must lie in [0, n_episodes)");
  }
  if (n_seeds < 1) throw ConfigError("n_seeds must be >= 1");
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (const Field* f = find_field(key)) {
      set_field(c, *f, v);
    } else if (key == "a_k" || key == "b_k") {
      if (!v.is_number()) throw ConfigError(key + ": expected a number");
      const double x = v.get<double>();
      if (key == "a_k") {
        c.episode.hormones.clarity.gain = c.episode.hormones.confusion.gain = x;
      } else {
        c.episode.hormones.clarity.bias = c.episode.hormones.confusion.bias = x;
      }
    } else if (key == "task") {
      if (!v.is_string()) throw ConfigError("task: expected a string");
      const auto t = task_from_string(v.get<std::string>());
      if (!t) throw ConfigError("task: unknown task " + v.get<std::string>());
      c.task = *t;
    } else if (key == "difficulty") {
      if (!v.is_string()) throw ConfigError("difficulty: expected a string");
      const auto s = v.get<std::string>();
      if (s == "standard") {
        c.difficulty = Difficulty::standard;
      } else if (s == "extreme") {
        c.difficulty = Difficulty::extreme;
      } else {
        throw ConfigError("difficulty: expected standard or extreme");
      }
    } else if (key == "selection") {
      if (!v.is_string()) throw ConfigError("selection: expected a string");
      const auto s = v.get<std::string>();
      if (s == "exact") {
        c.episode.selection = SelectionMode::exact;
      } else if (s == "primal_dual") {
        c.episode.selection = SelectionMode::primal_dual;
      } else {
        throw ConfigError("selection: expected exact or primal_dual");
      }
    } else if (key == "inherited") {
      parse_inherited(c, v);
    } else if (key == "costs") {
      parse_costs(c, v);
    } else {
      throw ConfigError("unknown key " + key);
    }
  }
  c.validate();
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const RunConfig& c) {
  json doc = json::object();
  for (const Field& f : fields()) {
    const double v = f.get(c);
    switch (f.kind) {
      case Kind::real:
        doc[f.key] = v;
        break;
      case Kind::integer:
        if (std::string(f.key) == "seed") {
          doc[f.key] = c.seed;
        } else {
          doc[f.key] = static_cast<std::int64_t>(v);
        }
        break;
      case Kind::boolean:
        doc[f.key] = v != 0.0;
        break;
    }
  }
  doc["task"] = std::string(to_string(c.task));
  doc["difficulty"] = c.difficulty == Difficulty::standard ? "standard" : "extreme";
  doc["selection"] = c.episode.selection == SelectionMode::exact ? "exact" : "primal_dual";
  const InheritedSchedule& s = c.episode.inherited;
  doc["inherited"] = {{"confidence", s.confidence ? json(*s.confidence) : json(nullptr)},
                      {"alertness", s.alertness ? json(*s.alertness) : json(nullptr)},
                      {"inhibition", s.inhibition},
                      {"curiosity", s.curiosity},
                      {"energy", s.energy},
                      {"energy_slope", s.energy_slope}};
  json costs = json::object();
  for (AgentId id : kAllAgents) costs[std::string(to_string(id))] = c.episode.costs.value[index_of(id)];
  doc["costs"] = costs;
  return doc;
}

RunConfig with_parameter(const RunConfig& config, const std::string& key, double value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown parameter " + key);
  RunConfig c = config;
  f->set(c, value);
  c.validate();
  return c;
}

double parameter_value(const RunConfig& config, const std::string& key) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError("unknown parameter " + key);
  return f->get(config);
}

std::vector<std::string> GateReport::lines() const {
  auto fmt = [](double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << x;
    return os.str();
  };
  std::vector<std::string> out;
  for (const StabilityRow* r : {&stability.clarity, &stability.confusion}) {
    out.push_back("stability " + r->hormone + ": lambda_" + r->hormone + "=" + fmt(r->lhs) +
                  (r->pass ? " > " : " <= ") + fmt(r->rhs) + (r->pass ? "  PASS" : "  FAIL"));
  }
  out.push_back("dt bound: dt=" + fmt(dt) + (dt_ok ? " < " : " >= ") + fmt(bounds.overall()) +
                " (c " + fmt(bounds.clarity) + ", u " + fmt(bounds.confusion) + ")" +
                (dt_ok ? "  PASS" : "  FAIL"));
  return out;
}

GateReport check_gates(const HormoneParams& p, double chi_max) {
  GateReport r;
  r.stability = check_stability(p, chi_max);
  r.bounds = dt_bounds(p, chi_max);
  r.dt = p.dt;
  r.dt_ok = p.dt < r.bounds.overall();
  return r;
}

void enforce_gates(const HormoneParams& p) {
  const GateReport r = check_gates(p);
  if (r.pass()) return;
  std::string msg;
  for (const std::string& line : r.lines()) {
    if (line.ends_with("FAIL")) msg += (msg.empty() ? "" : "; ") + line;
  }
  throw GateError(msg);
}

}  // namespace hrr
