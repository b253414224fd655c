#include "hrr/engrams.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

constexpr std::size_t kTrajectoryCap = 10000;

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("engram: ") + what);
}

}  // namespace

std::size_t stored_length(int t_star, int stride) {
  if (stride <= 1) return static_cast<std::size_t>(t_star);
  const int regular = t_star / stride;
  return static_cast<std::size_t>(regular + (t_star % stride != 0 ? 1 : 0));
}

void Engram::validate() const {
  require(t_star >= 1, "t_star must be >= 1");
  require(stride >= 1, "stride must be >= 1");
  require(trajectory.size() == stored_length(t_star, stride), "trajectory length mismatch");
  require(std::all_of(context.begin(), context.end(), in_unit), "context outside [0,1]");
  require(in_unit(beta), "beta outside [0,1]");
  require(std::all_of(s0.begin(), s0.end(), in_unit), "s0 outside [0,1]");
  for (const auto& s : trajectory) {
    require(s.size() == s0.size(), "state dimension mismatch");
    require(std::all_of(s.begin(), s.end(), in_unit), "state outside [0,1]");
  }
}

Engram make_engram(const HormoneContext& context, const std::array<bool, kAgentCount>& activation,
                   CognitiveState s0, const std::vector<CognitiveState>& states, Output y_final,
                   double beta) {
  if (states.empty()) throw std::invalid_argument("make_engram: empty trajectory");
  Engram e;
  e.context = context;
  e.activation = activation;
  e.t_star = static_cast<int>(states.size());
  e.stride = s0.size() * states.size() > kTrajectoryCap ? 2 : 1;
  for (int t = e.stride; t <= e.t_star; t += e.stride) e.trajectory.push_back(states[t - 1]);
  if (e.t_star % e.stride != 0) e.trajectory.push_back(states.back());
  e.s0 = std::move(s0);
  e.y_final = std::move(y_final);
  e.beta = std::clamp(beta, 0.0, 1.0);
  return e;
}

void RetrievalParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (k_ret < 1) throw ConfigError("k_ret must be >= 1");
  if (m_max < static_cast<std::size_t>(k_ret)) throw ConfigError("m_max must be >= k_ret");
  if (!(theta_ret >= 0.0)) throw ConfigError("theta_ret must be >= 0");
  if (!(eps_sig >= 0.0)) throw ConfigError("eps_sig must be >= 0");
}

bool should_write(const Output& y, const Output* y_prev, double eps_sig) {
  double n2 = 0.0;
  for (double v : y) n2 += v * v;
  if (std::sqrt(n2) < eps_sig || n2 == 0.0) return false;
  if (y_prev == nullptr) return true;
  if (y_prev->size() != y.size()) return true;
  double l1 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) l1 += std::abs(y[i] - (*y_prev)[i]);
  return l1 >= 1.0;
}

double weighted_cosine(const HormoneContext& q, const HormoneContext& m) {
  double dot = 0.0, nq = 0.0, nm = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double w = 1.0 + q[k];
    dot += w * q[k] * m[k];
    nq += w * q[k] * q[k];
    nm += w * m[k] * m[k];
  }
  if (nq <= 0.0 || nm <= 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(nq * nm), -1.0, 1.0);
}

double similarity(const HormoneContext& q, const Engram& e, double alpha) {
  return alpha * weighted_cosine(q, e.context) + (1.0 - alpha) / static_cast<double>(e.t_star);
}

std::size_t EngramStore::eviction_victim() const {
  std::vector<std::size_t> order(engrams_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto older = [&](std::size_t a, std::size_t b) {
    if (engrams_[a].last_access != engrams_[b].last_access)
      return engrams_[a].last_access < engrams_[b].last_access;
    return engrams_[a].inserted < engrams_[b].inserted;
  };
  std::sort(order.begin(), order.end(), older);
  const std::size_t decile = std::max<std::size_t>(1, (order.size() + 9) / 10);
  const std::uint64_t cutoff = engrams_[order[decile - 1]].last_access;
  std::size_t victim = order.front();
  for (std::size_t i : order) {
    if (engrams_[i].last_access > cutoff) break;
    if (engrams_[i].t_star > engrams_[victim].t_star) victim = i;
  }
  return victim;
}

void EngramStore::insert(Engram e, std::size_t m_max) {
  if (m_max == 0) throw std::invalid_argument("EngramStore::insert: m_max must be >= 1");
  e.validate();
  while (engrams_.size() >= m_max) {
    engrams_.erase(engrams_.begin() + static_cast<std::ptrdiff_t>(eviction_victim()));
  }
  e.inserted = ++clock_;
  e.last_access = 0;
  engrams_.push_back(std::move(e));
}

std::vector<const Engram*> EngramStore::retrieve(const HormoneContext& q, const RetrievalParams& p) {
  struct Scored {
    std::size_t index;
    double sim;
  };
  std::vector<Scored> hits;
  for (std::size_t i = 0; i < engrams_.size(); ++i) {
    const double s = similarity(q, engrams_[i], p.alpha);
    if (s >= p.theta_ret) hits.push_back({i, s});
  }
  std::sort(hits.begin(), hits.end(), [&](const Scored& a, const Scored& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (engrams_[a.index].t_star != engrams_[b.index].t_star)
      return engrams_[a.index].t_star < engrams_[b.index].t_star;
    return engrams_[a.index].inserted < engrams_[b.index].inserted;
  });
  if (hits.size() > static_cast<std::size_t>(p.k_ret)) hits.resize(static_cast<std::size_t>(p.k_ret));
  std::vector<const Engram*> out;
  for (const Scored& h : hits) {
    engrams_[h.index].last_access = ++clock_;
    out.push_back(&engrams_[h.index]);
  }
  return out;
}

void EngramStore::save(std::ostream& os) const {
  for (const Engram& e : engrams_) {
    nlohmann::json j;
    j["context"] = e.context;
    j["activation"] = e.activation;
    j["s0"] = e.s0;
    j["trajectory"] = e.trajectory;
    j["stride"] = e.stride;
    j["y_final"] = e.y_final;
    j["t_star"] = e.t_star;
    j["beta"] = e.beta;
    j["last_access"] = e.last_access;
    j["inserted"] = e.inserted;
    os << j.dump() << '\n';
  }
}

EngramStore EngramStore::load(std::istream& is) {
  EngramStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      Engram e;
      e.context = j.at("context").get<HormoneContext>();
      e.activation = j.at("activation").get<std::array<bool, kAgentCount>>();
      e.s0 = j.at("s0").get<CognitiveState>();
      e.trajectory = j.at("trajectory").get<std::vector<CognitiveState>>();
      e.stride = j.at("stride").get<int>();
      e.y_final = j.at("y_final").get<Output>();
      e.t_star = j.at("t_star").get<int>();
      e.beta = j.at("beta").get<double>();
      e.last_access = j.at("last_access").get<std::uint64_t>();
      e.inserted = j.at("inserted").get<std::uint64_t>();
      e.validate();
      store.clock_ = std::max({store.clock_, e.last_access, e.inserted});
      store.engrams_.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return store;
}

CognitiveState warm_start(const std::vector<const Engram*>& retrieved) {
  if (retrieved.empty()) throw std::invalid_argument("warm_start: no engrams");
  CognitiveState c(retrieved.front()->terminal().size(), 0.0);
  for (const Engram* e : retrieved) {
    const CognitiveState& s = e->terminal();
    if (s.size() != c.size()) throw std::invalid_argument("warm_start: dimension mismatch");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += s[i];
  }
  const double k = static_cast<double>(retrieved.size());
  for (double& x : c) x = std::clamp(x / k, 0.0, 1.0);
  return c;
}

int predicted_saving(double eps_cold, double eps_warm, double rho) {
  if (!(eps_cold > 0.0 && eps_warm > 0.0)) throw std::invalid_argument("predicted_saving: eps must be > 0");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("predicted_saving: rho must lie in (0,1)");
  if (eps_warm > eps_cold) throw std::invalid_argument("predicted_saving: eps_warm > eps_cold");
  const double steps = std::log(eps_cold / eps_warm) / std::log(1.0 / rho);
  // Guard against 1.0000000000000002-style overshoot on exact powers.
  return static_cast<int>(std::ceil(steps - 1e-12));
}

}  // namespace hrr
