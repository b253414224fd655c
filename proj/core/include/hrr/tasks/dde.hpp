#pragma once

// Parameter identification for linear second-order recurrences
// x_{t+1} = theta1 x_t + theta2 x_{t-1}, observed over ten samples.

#include <array>
#include <cstdint>
#include <string>

#include "hrr/task.hpp"

namespace hrr {

using Theta = std::array<double, 2>;

struct DdeInstance {
  Theta theta{};
  std::array<double, 10> x{};
  std::string family = "linear2";
};

// True when both roots of z^2 - theta1 z - theta2 lie strictly inside the unit circle.
bool spectrally_stable(const Theta& theta);

// theta* uniform in [-0.9,0.9]^2 (stable draws only), x0 and x1 uniform in
// [-1,1]; draws whose regression is numerically singular are redrawn.
DdeInstance generate_dde(std::uint64_t seed);

class DdeTask final : public Task {
 public:
  static constexpr double kGain = 1.9;
  static constexpr double kGridSpacing = 0.0125;
  static constexpr int kGridHalf = 10;  // 21 x 21 grid
  static constexpr double kTolerance = 1e-2;
  static constexpr double kFitTolerance = 1e-2;
  static constexpr double kOutputScale = 100.0;

  explicit DdeTask(DdeInstance instance);

  std::string_view name() const override { return "dde"; }
  std::size_t dimension() const override { return 2; }
  CognitiveState encode() const override;
  CognitiveState project(const CognitiveState& s) const override;
  Output decode(const CognitiveState& s) const override;
  AgentDelta delta(AgentId agent, const CognitiveState& s, const Output& y,
                   const HypothesisSet& hypotheses) const override;
  std::vector<Hypothesis> propose(const CognitiveState& s, int count, Rng& rng) const override;
  bool consistent(const CognitiveState& candidate) const override;
  OutputDistribution distribution(const CognitiveState& s, const Output& y) const override;
  std::vector<Violation> axioms(const Output& y) const override;
  std::size_t axiom_count() const override { return 3; }
  bool is_correct(const Output& y) const override;
  ContextSignature context() const override;

  const DdeInstance& instance() const { return instance_; }

  // R(theta) = sum_t (theta1 x_t + theta2 x_{t-1} - x_{t+1})^2 over t = 1..8.
  double residual(const Theta& theta) const;
  Theta gradient(const Theta& theta) const;
  // sqrt(R / sum x_{t+1}^2).
  double relative_rms(const Theta& theta) const;
  double score(const Theta& theta) const;

  // Gauss-Newton (curvature-normalised) descent step target.
  Theta newton_target(const Theta& theta) const;
  // Minimiser of R along the steepest-descent ray from theta.
  Theta line_search_target(const Theta& theta) const;
  // Least-squares estimate; the normal-equations oracle.
  Theta oracle() const;

  static Theta to_theta(const CognitiveState& s);
  static CognitiveState to_state(const Theta& theta);
  static Theta theta_of(const Output& y);

 private:
  DdeInstance instance_;
  // Normal equations A theta = c with A = X^T X, c = X^T b.
  double a11_ = 0.0, a12_ = 0.0, a22_ = 0.0, c1_ = 0.0, c2_ = 0.0, bb_ = 0.0;
  Theta oracle_{};
};

}  // namespace hrr
