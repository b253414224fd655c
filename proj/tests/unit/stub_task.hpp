#pragma once

#include "hrr/task.hpp"

namespace hrr::test {

// Two-dimensional task pulled towards a fixed target. With gain 0 every
// delta vanishes and the output is already correct.
class StubTask : public Task {
 public:
  explicit StubTask(CognitiveState target = {0.5, 0.5}, double gain = 0.0)
      : target_(std::move(target)), gain_(gain) {}

  std::string_view name() const override { return "stub"; }
  std::size_t dimension() const override { return target_.size(); }
  CognitiveState encode() const override { return CognitiveState(target_.size(), 0.5); }
  Output decode(const CognitiveState& s) const override { return s; }
  AgentDelta delta(AgentId, const CognitiveState& s, const Output&,
                   const HypothesisSet&) const override {
    return {pull_towards(s, target_, gain_), {}};
  }
  OutputDistribution distribution(const CognitiveState&, const Output&) const override {
    return {1.0, 0.0, 0.0, 0.0};
  }
  std::vector<Violation> axioms(const Output&) const override { return {}; }
  std::size_t axiom_count() const override { return 0; }
  bool is_correct(const Output&) const override { return true; }
  ContextSignature context() const override { return {}; }

 private:
  CognitiveState target_;
  double gain_;
};

}  // namespace hrr::test
