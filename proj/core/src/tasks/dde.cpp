#include "hrr/tasks/dde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

Theta clamp_box(Theta t) {
  t[0] = std::clamp(t[0], -1.0, 1.0);
  t[1] = std::clamp(t[1], -1.0, 1.0);
  return t;
}

bool feasible(const Theta& t) {
  return std::abs(t[0]) <= 1.0 && std::abs(t[1]) <= 1.0 && spectrally_stable(t);
}

// Last feasible point on the segment from `from` (feasible) towards `to`.
Theta feasible_towards(const Theta& from, const Theta& to) {
  if (feasible(to)) return to;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Theta p{from[0] + mid * (to[0] - from[0]), from[1] + mid * (to[1] - from[1])};
    (feasible(p) ? lo : hi) = mid;
  }
  return {from[0] + lo * (to[0] - from[0]), from[1] + lo * (to[1] - from[1])};
}

}  // namespace

bool spectrally_stable(const Theta& theta) {
  // Schur-Cohn conditions for z^2 - a z - b.
  const double a = theta[0];
  const double b = theta[1];
  return std::abs(b) < 1.0 && a + b < 1.0 && b - a < 1.0;
}

DdeInstance generate_dde(std::uint64_t seed) {
  Rng rng(seed);
  for (;;) {
    DdeInstance inst;
    inst.theta = {rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    if (!spectrally_stable(inst.theta)) continue;
    inst.x[0] = rng.uniform(-1.0, 1.0);
    inst.x[1] = rng.uniform(-1.0, 1.0);
    for (std::size_t t = 1; t + 1 < inst.x.size(); ++t) {
      inst.x[t + 1] = inst.theta[0] * inst.x[t] + inst.theta[1] * inst.x[t - 1];
    }
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    for (std::size_t t = 1; t + 1 < inst.x.size(); ++t) {
      a11 += inst.x[t] * inst.x[t];
      a12 += inst.x[t] * inst.x[t - 1];
      a22 += inst.x[t - 1] * inst.x[t - 1];
    }
    const double trace = a11 + a22;
    if (trace <= 0.0 || (a11 * a22 - a12 * a12) < 1e-6 * trace * trace) continue;
    return inst;
  }
}

DdeTask::DdeTask(DdeInstance instance) : instance_(std::move(instance)) {
  const auto& x = instance_.x;
  for (std::size_t t = 1; t + 1 < x.size(); ++t) {
    a11_ += x[t] * x[t];
    a12_ += x[t] * x[t - 1];
    a22_ += x[t - 1] * x[t - 1];
    c1_ += x[t] * x[t + 1];
    c2_ += x[t - 1] * x[t + 1];
    bb_ += x[t + 1] * x[t + 1];
  }
  const double det = a11_ * a22_ - a12_ * a12_;
  if (!(std::abs(det) > 0.0)) throw TaskError("dde: singular regression");
  oracle_ = {(a22_ * c1_ - a12_ * c2_) / det, (a11_ * c2_ - a12_ * c1_) / det};
}

Theta DdeTask::to_theta(const CognitiveState& s) { return {2.0 * s[0] - 1.0, 2.0 * s[1] - 1.0}; }

CognitiveState DdeTask::to_state(const Theta& theta) {
  return {std::clamp((theta[0] + 1.0) * 0.5, 0.0, 1.0), std::clamp((theta[1] + 1.0) * 0.5, 0.0, 1.0)};
}

Theta DdeTask::theta_of(const Output& y) { return {y[0] / kOutputScale, y[1] / kOutputScale}; }

double DdeTask::residual(const Theta& th) const {
  const auto& x = instance_.x;
  double r = 0.0;
  for (std::size_t t = 1; t + 1 < x.size(); ++t) {
    const double e = th[0] * x[t] + th[1] * x[t - 1] - x[t + 1];
    r += e * e;
  }
  return r;
}

Theta DdeTask::gradient(const Theta& th) const {
  return {2.0 * (a11_ * th[0] + a12_ * th[1] - c1_), 2.0 * (a12_ * th[0] + a22_ * th[1] - c2_)};
}

double DdeTask::relative_rms(const Theta& th) const {
  if (bb_ <= 0.0) return std::sqrt(residual(th));
  return std::sqrt(residual(th) / bb_);
}

double DdeTask::score(const Theta& th) const { return 1.0 / (1.0 + 100.0 * relative_rms(th)); }

Theta DdeTask::newton_target(const Theta& th) const {
  // Hessian 2A; the Gauss-Newton step -(2A)^{-1} grad lands on the minimiser.
  const Theta g = gradient(th);
  const double det = a11_ * a22_ - a12_ * a12_;
  const double s0 = (a22_ * g[0] - a12_ * g[1]) / (2.0 * det);
  const double s1 = (a11_ * g[1] - a12_ * g[0]) / (2.0 * det);
  return clamp_box({th[0] - s0, th[1] - s1});
}

Theta DdeTask::line_search_target(const Theta& th) const {
  const Theta g = gradient(th);
  // Along -g: R is quadratic in alpha with curvature 2 g^T A g.
  const double gg = g[0] * g[0] + g[1] * g[1];
  const double gag = g[0] * (a11_ * g[0] + a12_ * g[1]) + g[1] * (a12_ * g[0] + a22_ * g[1]);
  if (gg <= 0.0 || gag <= 0.0) return th;
  const double alpha = gg / (2.0 * gag);
  return clamp_box({th[0] - alpha * g[0], th[1] - alpha * g[1]});
}

Theta DdeTask::oracle() const { return oracle_; }

CognitiveState DdeTask::encode() const { return {0.5, 0.5}; }

CognitiveState DdeTask::project(const CognitiveState& s) const {
  if (s.size() != 2) throw TaskError("dde: state dimension must be 2");
  return clip_unit(s);
}

Output DdeTask::decode(const CognitiveState& s) const {
  const Theta th = to_theta(s);
  return {th[0] * kOutputScale, th[1] * kOutputScale};
}

AgentDelta DdeTask::delta(AgentId agent, const CognitiveState& s, const Output&,
                          const HypothesisSet& hypotheses) const {
  const Theta th = to_theta(s);
  AgentDelta out;
  switch (agent) {
    case AgentId::R1A:
      out.delta = pull_towards(s, to_state(newton_target(th)), kGain);
      break;
    case AgentId::R1B: {
      const Hypothesis* best = hypotheses.best();
      out.delta = best ? pull_towards(s, best->state, kGain) : CognitiveState(2, 0.0);
      break;
    }
    case AgentId::R1C:
      out.delta = pull_towards(s, to_state(line_search_target(th)), kGain);
      break;
    case AgentId::R1D: {
      const Theta from = feasible(th) ? th : Theta{0.0, 0.0};
      out.delta = pull_towards(s, to_state(feasible_towards(from, newton_target(th))), kGain);
      if (!feasible(th)) out.violations.push_back({"stability"});
      break;
    }
    default:
      out.delta.assign(2, 0.0);
  }
  return out;
}

std::vector<Hypothesis> DdeTask::propose(const CognitiveState& s, int count, Rng& rng) const {
  const Theta th = to_theta(s);
  const double sigma = std::clamp(relative_rms(th), 1e-3, 0.2);
  std::vector<Hypothesis> out;
  out.push_back({s, score(th)});
  for (int i = 0; i < count; ++i) {
    const Theta c = clamp_box({th[0] + sigma * rng.normal(), th[1] + sigma * rng.normal()});
    out.push_back({to_state(c), score(c)});
  }
  return out;
}

bool DdeTask::consistent(const CognitiveState& candidate) const {
  return feasible(to_theta(candidate));
}

OutputDistribution DdeTask::distribution(const CognitiveState& s, const Output&) const {
  const Theta th = to_theta(s);
  const std::size_t side = 2 * kGridHalf + 1;
  OutputDistribution p(side * side, 0.0);
  // Bandwidth: length of the predicted Gauss-Newton correction.
  const Theta target = newton_target(th);
  const double rms = std::hypot(target[0] - th[0], target[1] - th[1]);
  const std::size_t centre = static_cast<std::size_t>(kGridHalf) * side + kGridHalf;
  if (rms < 1e-9) {
    p[centre] = 1.0;
    return p;
  }
  double total = 0.0;
  for (int i = -kGridHalf; i <= kGridHalf; ++i) {
    for (int j = -kGridHalf; j <= kGridHalf; ++j) {
      const double d2 = kGridSpacing * kGridSpacing * static_cast<double>(i * i + j * j);
      const double w = std::exp(-0.5 * d2 / (rms * rms));
      p[static_cast<std::size_t>(i + kGridHalf) * side + static_cast<std::size_t>(j + kGridHalf)] = w;
      total += w;
    }
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<Violation> DdeTask::axioms(const Output& y) const {
  const Theta th = theta_of(y);
  std::vector<Violation> v;
  if (std::abs(th[0]) > 1.0 || std::abs(th[1]) > 1.0) v.push_back({"bounds"});
  if (!spectrally_stable(th)) v.push_back({"stability"});
  if (relative_rms(th) > kFitTolerance) v.push_back({"fit"});
  return v;
}

bool DdeTask::is_correct(const Output& y) const {
  const Theta th = theta_of(y);
  return std::hypot(th[0] - oracle_[0], th[1] - oracle_[1]) <= kTolerance;
}

ContextSignature DdeTask::context() const {
  const auto& x = instance_.x;
  double r0 = 0.0, r1 = 0.0, r2 = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    r0 += x[t] * x[t];
    if (t >= 1) r1 += x[t] * x[t - 1];
    if (t >= 2) r2 += x[t] * x[t - 2];
  }
  ContextSignature c;
  if (r0 <= 0.0) return c;
  const double rho1 = r1 / r0;
  const double rho2 = r2 / r0;
  const double den = 1.0 - rho1 * rho1;
  // Yule-Walker estimate from the two sample autocorrelations.
  const double yw1 = std::abs(den) > 1e-12 ? rho1 * (1.0 - rho2) / den : rho1;
  const double yw2 = std::abs(den) > 1e-12 ? (rho2 - rho1 * rho1) / den : 0.0;
  c.confidence = std::clamp((yw1 + 1.0) * 0.5, 0.0, 1.0);
  c.alertness = std::clamp((yw2 + 1.0) * 0.5, 0.0, 1.0);
  return c;
}

}  // namespace hrr
