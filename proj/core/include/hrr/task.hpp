#pragma once

// Contract every benchmark task adapter fulfils for the reasoning loop.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hrr/agent_id.hpp"
#include "hrr/observe.hpp"
#include "hrr/random.hpp"

namespace hrr {

struct Violation {
  std::string constraint;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Hypothesis {
  CognitiveState state;
  double score = 0.0;  // larger is better, in [0,1]
};

// Bounded candidate pool shared by the hypothesis agents of one episode.
class HypothesisSet {
 public:
  explicit HypothesisSet(std::size_t capacity = 32);

  // Inserts and evicts the lowest score beyond capacity (earliest on ties).
  void add(Hypothesis h);
  void prune_below(double floor);
  void keep_only(const std::vector<bool>& keep);

  const Hypothesis* best() const;
  const std::vector<Hypothesis>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::vector<Hypothesis> entries_;
};

struct AgentDelta {
  CognitiveState delta;              // same dimension as the state, |.|_inf <= 1
  std::vector<Violation> violations;  // contradictions met while computing it
};

// Exogenous hormone levels derived from an instance.
struct ContextSignature {
  double confidence = 0.5;
  double alertness = 0.5;
};

class Task {
 public:
  virtual ~Task() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dimension() const = 0;

  // Cold-start state.
  virtual CognitiveState encode() const = 0;
  // Re-imposes the instance's hard facts on an externally supplied state.
  virtual CognitiveState project(const CognitiveState& s) const;
  virtual Output decode(const CognitiveState& s) const = 0;

  virtual AgentDelta delta(AgentId agent, const CognitiveState& s, const Output& y,
                           const HypothesisSet& hypotheses) const = 0;
  virtual std::vector<Hypothesis> propose(const CognitiveState& s, int count, Rng& rng) const;
  virtual bool consistent(const CognitiveState& candidate) const;

  virtual OutputDistribution distribution(const CognitiveState& s, const Output& y) const = 0;
  virtual std::vector<Violation> axioms(const Output& y) const = 0;
  virtual std::size_t axiom_count() const = 0;

  // Judged against the task's independent oracle.
  virtual bool is_correct(const Output& y) const = 0;
  virtual ContextSignature context() const = 0;
};

// Componentwise clip into [0,1].
CognitiveState clip_unit(CognitiveState s);

// clip(gain * (target - s), -1, 1) componentwise.
CognitiveState pull_towards(const CognitiveState& s, const CognitiveState& target, double gain);

}  // namespace hrr
