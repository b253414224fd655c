#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hrr/errors.hpp"
#include "hrr/hormones.hpp"
#include "hrr/random.hpp"

namespace hrr {
namespace {

HormoneParams noiseless() {
  HormoneParams p;
  p.clarity.sigma_eta = 0.0;
  p.confusion.sigma_eta = 0.0;
  return p;
}

// Drift with unit amplitude, so the emission enters as given.
TEST(Hormones, DriftHandEvaluation) {
  HormoneParams p = noiseless();
  HormoneVector h;
  h.clarity = 0.5;
  h.confusion = 0.5;
  const HormoneVector next = step_dynamics(h, {0.5, 0.0}, 0.5, p, {});
  EXPECT_NEAR(next.clarity, 0.5 + (1.0 / 1.5) * (-0.375 + 0.5 - 0.15 - 0.025), 1e-12);
  EXPECT_NEAR(next.clarity, 0.46667, 1e-5);
}

TEST(Hormones, EmissionVanishesAtSaturation) {
  EXPECT_EQ(emit(1.0, 1.0, 5.0, -2.5), 0.0);
  EXPECT_NEAR(emit(0.5, 0.0, 5.0, -2.5), 0.5, 1e-12);
  EXPECT_NEAR(emit(0.5, 0.5, 5.0, -2.5), 0.25, 1e-12);
}

TEST(Hormones, EmissionAtHighSignal) {
  EXPECT_NEAR(emit(1.0, 0.5, 5.0, -2.5), 0.5 / (1.0 + std::exp(-2.5)), 1e-15);
  EXPECT_NEAR(emit(1.0, 0.5, 5.0, -2.5), 0.46206, 2e-5);
  EXPECT_EQ(emit(0.9, 1.0, 5.0, -2.5), 0.0);
}

TEST(Hormones, AggregationWorkedValues) {
  const EmissionWeights w;
  EXPECT_NEAR(phi_confusion(0.5, 0.2, 0.8, w), 0.335, 1e-12);
  EXPECT_NEAR(phi_clarity(0.2, 0.1, 1.0, w), 0.885, 1e-12);
}

TEST(Hormones, OriginStationaryUnderZeroDrive) {
  const HormoneVector next = step_dynamics({}, {}, 0.7, noiseless(), {});
  EXPECT_EQ(next, HormoneVector{});
}

TEST(Hormones, ProjectionClipsAtZero) {
  HormoneVector h;
  h.clarity = 0.05;
  h.confusion = 1.0;
  HormoneParams p = noiseless();
  p.dt = 1.4;  // admissible, yet the decay overshoots zero
  const HormoneVector next = step_dynamics(h, {}, 1.0, p, {});
  EXPECT_EQ(next.clarity, 0.0);
}

TEST(Hormones, SigmoidIsStableForLargeArguments) {
  EXPECT_NEAR(sigmoid(800.0), 1.0, 1e-15);
  EXPECT_NEAR(sigmoid(-800.0), 0.0, 1e-15);
  EXPECT_NEAR(sigmoid(0.0), 0.5, 1e-15);
}

TEST(Hormones, AggregatedSignals) {
  const EmissionWeights w;
  EXPECT_NEAR(phi_confusion(1.0, 1.0, 0.0, w), 1.0, 1e-12);
  EXPECT_NEAR(phi_confusion(0.0, 0.0, 1.0, w), 0.0, 1e-12);
  EXPECT_NEAR(phi_clarity(0.0, 0.0, 1.0, w), 1.0, 1e-12);
  EXPECT_NEAR(phi_clarity(1.0, 1.0, -1.0, w), 0.0, 1e-12);
  EXPECT_NEAR(phi_clarity(0.5, 0.5, 0.0, w), 0.4 * 0.5 + 0.35 * 0.5 + 0.25 * 0.5, 1e-12);
}

TEST(Hormones, StabilityGateDefaults) {
  const StabilityReport r = check_stability(HormoneParams{});
  EXPECT_DOUBLE_EQ(r.clarity.lhs, 0.75);
  EXPECT_NEAR(r.clarity.rhs, 0.70, 1e-12);
  EXPECT_DOUBLE_EQ(r.confusion.lhs, 0.70);
  EXPECT_NEAR(r.confusion.rhs, 0.65, 1e-12);
  EXPECT_TRUE(r.pass());
}

TEST(Hormones, StabilityGateFailsForWeakClarityDecay) {
  HormoneParams p;
  p.clarity.lambda = 0.65;
  const StabilityReport r = check_stability(p);
  EXPECT_FALSE(r.clarity.pass);
  EXPECT_TRUE(r.confusion.pass);
  EXPECT_FALSE(r.pass());
}

TEST(Hormones, StabilityGateNoLoad) {
  HormoneParams p;
  p.clarity.rho = 0.0;
  p.gamma_cu = 0.0;
  p.clarity.lambda = 0.01;
  EXPECT_TRUE(check_stability(p).clarity.pass);
}

TEST(Hormones, StepBoundWithoutCouplings) {
  HormoneParams p;
  p.gamma_cu = p.gamma_uc = 0.0;
  p.clarity.rho = p.confusion.rho = 0.0;
  p.clarity.lambda = p.confusion.lambda = 0.5;
  p.clarity.tau = p.confusion.tau = 1.0;
  EXPECT_NEAR(dt_bound(p), 4.0, 1e-12);
}

TEST(Hormones, StepBoundArithmetic) {
  const DtBounds b = dt_bounds(HormoneParams{});
  EXPECT_NEAR(b.clarity, 2.0 * 1.5 / (0.75 + 0.60 + 0.10), 1e-12);
  EXPECT_NEAR(b.clarity, 2.0690, 1e-3);
  EXPECT_NEAR(b.confusion, 1.4815, 1e-3);
  EXPECT_NEAR(dt_bound(HormoneParams{}), 1.4815, 1e-3);
}

TEST(Hormones, StepRejectsInadmissibleDt) {
  HormoneParams p = noiseless();
  p.dt = 1.5;
  EXPECT_THROW(step_dynamics({}, {}, 0.0, p, {}), ConfigError);
  EXPECT_THROW(HormonalEngine(p, 1), ConfigError);
  p.dt = 1.0;
  EXPECT_NO_THROW(step_dynamics({}, {}, 0.0, p, {}));
}

TEST(Hormones, ProjectionKeepsUnitBox) {
  HormoneParams p;
  Rng rng(5);
  HormoneVector h;
  for (int i = 0; i < 2000; ++i) {
    h = step_dynamics(h, {rng.uniform(0, 3), rng.uniform(0, 3)}, rng.uniform(),
                      p, {10 * rng.normal(), 10 * rng.normal()});
    ASSERT_TRUE(h.valid());
  }
}

TEST(Hormones, InheritedHormonesPassThrough) {
  HormoneVector h;
  h.confidence = 0.3;
  h.inhibition = 0.4;
  h.curiosity = 0.2;
  h.energy = 0.9;
  h.alertness = 0.6;
  const HormoneVector next = step_dynamics(h, {1.0, 1.0}, 0.5, noiseless(), {});
  EXPECT_EQ(next.confidence, 0.3);
  EXPECT_EQ(next.inhibition, 0.4);
  EXPECT_EQ(next.curiosity, 0.2);
  EXPECT_EQ(next.energy, 0.9);
  EXPECT_EQ(next.alertness, 0.6);
}

TEST(Hormones, LyapunovIsZeroAtEquilibrium) {
  EXPECT_EQ(lyapunov({0.3, 0.2}, {0.3, 0.2}, HormoneParams{}), 0.0);
  HormoneVector h;
  h.clarity = 1.0;
  EXPECT_NEAR(lyapunov(h, {0.0, 0.0}, HormoneParams{}), 0.75, 1e-12);
  h.clarity = 0.4;
  h.confusion = 0.2;
  EXPECT_NEAR(lyapunov(h, {0.3, 0.2}, HormoneParams{}), 0.0075, 1e-12);
  h.clarity = 0.2;
  EXPECT_NEAR(lyapunov(h, {0.3, 0.2}, HormoneParams{}), 0.0075, 1e-12);
}

TEST(Hormones, ZeroDriveEquilibriumIsOrigin) {
  const Equilibrium e = estimate_equilibrium(noiseless(), Emissions{}, 1.0);
  EXPECT_EQ(e, (Equilibrium{0.0, 0.0}));
}

// Uncoupled case: h = E (1 - h) / lambda, solved by bisection on the scalar drift.
TEST(Hormones, UncoupledEquilibriumMatchesScalarBisection) {
  HormoneParams p = noiseless();
  p.gamma_cu = p.gamma_uc = 0.0;
  p.clarity.rho = p.confusion.rho = 0.0;
  const auto closed_loop = [&](double h) {
    return -p.clarity.lambda * h + p.clarity.amplitude * emit(1.0, h, p.clarity.gain, p.clarity.bias);
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (closed_loop(mid) > 0.0 ? lo : hi) = mid;
  }
  const Equilibrium e = estimate_equilibrium(p, Signals{1.0, 0.0}, 0.0);
  EXPECT_NEAR(e.clarity, 0.5 * (lo + hi), 1e-6);
}

// Independent oracle: for constant emissions each drift is affine in its own
// hormone, so h_c solves in closed form given h_u and h_u follows by bisection.
Equilibrium bisection_equilibrium(const HormoneParams& p, Emissions e, double chi,
                                  const HormoneVector& inh) {
  auto hc_of = [&](double hu) {
    const double num = e.clarity + p.gamma_inh_c * inh.inhibition;
    const double den = p.clarity.lambda + p.gamma_cu * hu + p.clarity.rho * chi +
                       p.gamma_inh_c * inh.inhibition;
    return std::clamp(num / den, 0.0, 1.0);
  };
  auto f = [&](double hu) {
    const double hc = hc_of(hu);
    return -p.confusion.lambda * hu + e.confusion - p.gamma_uc * hu * hc -
           p.confusion.rho * chi * hu + p.gamma_cur_u * inh.curiosity * (1.0 - hu);
  };
  double lo = 0.0, hi = 1.0;
  if (f(hi) > 0.0) return {hc_of(1.0), 1.0};
  if (f(lo) < 0.0) return {hc_of(0.0), 0.0};
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double hu = 0.5 * (lo + hi);
  return {hc_of(hu), hu};
}

TEST(Hormones, EquilibriumMatchesBisectionOracle) {
  const HormoneParams p = noiseless();
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Emissions e{rng.uniform(0.0, 0.6), rng.uniform(0.0, 0.6)};
    HormoneVector inh;
    inh.inhibition = rng.uniform();
    inh.curiosity = rng.uniform();
    const double chi = rng.uniform();
    const Equilibrium a = estimate_equilibrium(p, e, chi, inh);
    const Equilibrium b = bisection_equilibrium(p, e, chi, inh);
    EXPECT_NEAR(a.clarity, b.clarity, 1e-6);
    EXPECT_NEAR(a.confusion, b.confusion, 1e-6);
  }
}

TEST(Hormones, ConvergedObservationReachesStoppingRegion) {
  HormoneVector inh;
  inh.inhibition = 0.5;
  inh.curiosity = 0.2;
  const Equilibrium star = estimate_equilibrium(noiseless(), Signals{1.0, 0.0}, 0.5, inh);
  EXPECT_GE(star.clarity, 0.70);
  EXPECT_LE(star.confusion, 0.30);
}

// Noiseless constant drive from random starts: V never increases.
TEST(Hormones, LyapunovDescentFromRandomStarts) {
  const HormoneParams p = noiseless();
  Rng rng(2024);
  const Emissions e{0.4, 0.2};
  const double chi = 0.5;
  const Equilibrium star = estimate_equilibrium(p, e, chi);
  for (int start = 0; start < 100; ++start) {
    HormoneVector h;
    h.clarity = rng.uniform();
    h.confusion = rng.uniform();
    double v = lyapunov(h, star, p);
    bool settled = false;
    for (int step = 0; step < 200; ++step) {
      const HormoneVector next = step_dynamics(h, e, chi, p, {});
      const double v_next = lyapunov(next, star, p);
      ASSERT_LE(v_next, v + 1e-9) << "start " << start << " step " << step;
      const double moved = std::hypot(next.clarity - h.clarity, next.confusion - h.confusion);
      h = next;
      v = v_next;
      if (moved < 1e-6) {
        settled = true;
        break;
      }
    }
    EXPECT_TRUE(settled) << "start " << start;
  }
}

TEST(HormonalEngine, DelayQueueStartsQuiescent) {
  HormonalEngine engine(noiseless(), 1);
  engine.advance({0.9, 0.4}, 0.0);
  EXPECT_FALSE(engine.last_clarity_signal().has_value());
  ASSERT_TRUE(engine.last_confusion_signal().has_value());
  EXPECT_EQ(*engine.last_confusion_signal(), 0.4);
  engine.advance({0.1, 0.2}, 0.0);
  ASSERT_TRUE(engine.last_clarity_signal().has_value());
  EXPECT_EQ(*engine.last_clarity_signal(), 0.9);
}

TEST(HormonalEngine, DeterministicPerSeed) {
  HormonalEngine a(HormoneParams{}, 9), b(HormoneParams{}, 9);
  for (int t = 0; t < 20; ++t) {
    EXPECT_EQ(a.advance({0.5, 0.5}, 0.3), b.advance({0.5, 0.5}, 0.3));
  }
}

TEST(HormoneParams, ValidateRejectsOutOfDomain) {
  HormoneParams p;
  p.clarity.tau = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = HormoneParams{};
  p.confusion.lambda = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = HormoneParams{};
  p.clarity.delay = -1;
  EXPECT_THROW(p.validate(), ConfigError);
  EmissionWeights w;
  w.alpha_u = 0.5;
  EXPECT_THROW(w.validate(), ConfigError);
}

}  // namespace
}  // namespace hrr
