#pragma once

// Persistent memory of complete reasoning trajectories: significance-gated
// writes, similarity retrieval with a convergence-speed prior, LRU eviction
// with a significance override, and warm-start centroids.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hrr/agent_id.hpp"
#include "hrr/observe.hpp"

namespace hrr {

using HormoneContext = std::array<double, 7>;

struct Engram {
  HormoneContext context{};                       // h at episode start
  std::array<bool, kAgentCount> activation{};     // agents active at least once
  CognitiveState s0;
  std::vector<CognitiveState> trajectory;         // states t = stride, 2*stride, ..., t*
  int stride = 1;
  Output y_final;
  int t_star = 1;
  double beta = 0.0;  // normalised energy consumed
  std::uint64_t last_access = 0;  // 0 = never retrieved
  std::uint64_t inserted = 0;

  const CognitiveState& terminal() const { return trajectory.back(); }
  // Throws std::invalid_argument naming the broken invariant.
  void validate() const;

  friend bool operator==(const Engram&, const Engram&) = default;
};

// Number of stored states for a trajectory of length t_star at `stride`.
std::size_t stored_length(int t_star, int stride);

// Keeps every state when d * t* <= 1e4, otherwise every second one with the
// terminal state always kept.
Engram make_engram(const HormoneContext& context, const std::array<bool, kAgentCount>& activation,
                   CognitiveState s0, const std::vector<CognitiveState>& states_1_to_tstar,
                   Output y_final, double beta);

struct RetrievalParams {
  double alpha = 0.70;
  int k_ret = 3;
  double theta_ret = 0.3;
  std::size_t m_max = 1000;
  double eps_sig = 1e-3;

  void validate() const;
};

// |y - y_prev|_1 >= 1 and |y|_2 >= eps_sig; without y_prev only the norm test.
bool should_write(const Output& y, const Output* y_prev, double eps_sig);

// Cosine under the inner product diag(1 + q_k); 0 if either W-norm vanishes.
double weighted_cosine(const HormoneContext& q, const HormoneContext& m);

double similarity(const HormoneContext& q, const Engram& e, double alpha);

class EngramStore {
 public:
  std::size_t size() const { return engrams_.size(); }
  bool empty() const { return engrams_.empty(); }
  const std::vector<Engram>& engrams() const { return engrams_; }
  std::uint64_t clock() const { return clock_; }

  // Evicts first when already holding m_max engrams.
  void insert(Engram e, std::size_t m_max);

  // Up to k_ret engrams with similarity >= theta_ret, best first; ties go to
  // the smaller t*, then the earlier insertion. Marks the results accessed.
  // Pointers stay valid until the next insert.
  std::vector<const Engram*> retrieve(const HormoneContext& q, const RetrievalParams& p);

  // One engram per line. Loading throws std::runtime_error("line N: ...").
  void save(std::ostream& os) const;
  static EngramStore load(std::istream& is);

 private:
  std::size_t eviction_victim() const;

  std::vector<Engram> engrams_;
  std::uint64_t clock_ = 0;
};

// Componentwise mean of the terminal states, clipped to [0,1].
CognitiveState warm_start(const std::vector<const Engram*>& retrieved);

// ceil(ln(eps_cold / eps_warm) / ln(1 / rho)).
int predicted_saving(double eps_cold, double eps_warm, double rho);

}  // namespace hrr
