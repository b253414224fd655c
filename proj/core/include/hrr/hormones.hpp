#pragma once

// Two-hormone regulator: emission, Euler-Maruyama dynamics with projection,
// and the deployability gates (stability inequality, step-size bound).

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "hrr/random.hpp"

namespace hrr {

// Full hormonal field, every component in [0,1]. The first two entries are
// the regulated pair; the remaining five are exogenous inputs.
struct HormoneVector {
  double clarity = 0.0;     // h_c
  double confusion = 0.0;   // h_u
  double confidence = 0.0;  // h_conf
  double inhibition = 0.0;  // h_inh
  double curiosity = 0.0;   // h_cur
  double energy = 0.0;      // h_ene
  double alertness = 0.0;   // h_ale

  std::array<double, 7> to_array() const {
    return {clarity, confusion, confidence, inhibition, curiosity, energy, alertness};
  }
  static HormoneVector from_array(const std::array<double, 7>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  bool valid() const;

  friend bool operator==(const HormoneVector&, const HormoneVector&) = default;
};

// Per-hormone constants of the regulated pair.
struct HormoneChannel {
  double tau = 1.0;        // timescale, > 0
  double lambda = 0.7;     // decay rate, (0,1)
  int delay = 0;           // emission delay in whole cycles
  double rho = 0.10;       // resource coupling, [0,1)
  double sigma_eta = 0.0;  // noise amplitude
  double gain = 5.0;       // a_k
  double bias = -2.5;      // b_k
  double amplitude = 1.0;  // multiplies the emission entering the drift
};

struct HormoneParams {
  HormoneChannel clarity{1.5, 0.75, 1, 0.10, 0.01, 5.0, -2.5, 3.0};
  HormoneChannel confusion{1.0, 0.70, 0, 0.10, 0.01, 5.0, -2.5, 1.0};
  double gamma_cu = 0.60;     // confusion inhibits clarity
  double gamma_uc = 0.55;     // clarity inhibits confusion
  double gamma_cur_u = 0.25;  // curiosity excites confusion
  double gamma_inh_c = 0.20;  // inhibition excites clarity
  double dt = 1.0;
  int substeps = 4;  // Euler-Maruyama sub-steps per reasoning cycle

  // Domain checks only (no gates); throws ConfigError.
  void validate() const;
};

// Convex weights of the two aggregation functions.
struct EmissionWeights {
  double alpha_u = 0.45, beta_u = 0.35, gamma_u = 0.20;
  double alpha_c = 0.40, beta_c = 0.35, gamma_c = 0.25;

  void validate() const;
};

double sigmoid(double x);

// E = sigmoid(gain*phi + bias) * (1 - h). Zero whenever h == 1.
double emit(double phi, double h, double gain, double bias);

double phi_confusion(double entropy_norm, double err_norm, double conf_max,
                     const EmissionWeights& w);

// cos_align in [-1,1] is mapped to (cos+1)/2 before weighting.
double phi_clarity(double entropy_norm, double err_norm, double cos_align,
                   const EmissionWeights& w);

struct Emissions {
  double clarity = 0.0;
  double confusion = 0.0;
};

struct Noise {
  double clarity = 0.0;
  double confusion = 0.0;
};

struct Drift {
  double clarity = 0.0;
  double confusion = 0.0;
};

// Noiseless right-hand side (already divided by tau) at state h.
Drift drift(const HormoneVector& h, Emissions e, double chi, const HormoneParams& p);

// One projected Euler-Maruyama step of size p.dt. The inherited hormones are
// copied through unchanged. Throws ConfigError if p.dt is not admissible.
HormoneVector step_dynamics(const HormoneVector& h, Emissions delayed, double chi,
                            const HormoneParams& p, Noise noise);

struct StabilityRow {
  std::string hormone;
  double lhs = 0.0;  // lambda_k
  double rhs = 0.0;  // gamma_km + rho_k * chi_max
  bool pass = false;
};

struct StabilityReport {
  StabilityRow clarity;
  StabilityRow confusion;
  bool pass() const { return clarity.pass && confusion.pass; }
};

StabilityReport check_stability(const HormoneParams& p, double chi_max = 1.0);

struct DtBounds {
  double clarity = 0.0;
  double confusion = 0.0;
  double overall() const { return clarity < confusion ? clarity : confusion; }
};

DtBounds dt_bounds(const HormoneParams& p, double chi_max = 1.0);
double dt_bound(const HormoneParams& p, double chi_max = 1.0);

struct Equilibrium {
  double clarity = 0.0;
  double confusion = 0.0;

  friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

// V = 1/2 sum_k tau_k (h_k - h_k*)^2 over the regulated pair.
double lyapunov(const HormoneVector& h, Equilibrium star, const HormoneParams& p);

// Fixed point under constant emissions, by noiseless iteration of
// step_dynamics. `inherited` supplies the exogenous hormones.
// Throws std::runtime_error when 1e5 steps do not reach |drift| < 1e-9.
Equilibrium estimate_equilibrium(const HormoneParams& p, Emissions e, double chi,
                                 const HormoneVector& inherited = {});

// Aggregated observation signals feeding the two emissions.
struct Signals {
  double clarity = 0.0;    // phi_c
  double confusion = 0.0;  // phi_u
};

// Fixed point of the closed loop used by the engine: the emission is
// amplitude * emit(phi, h_k) with the anti-saturation factor evaluated at the
// current state.
Equilibrium estimate_equilibrium(const HormoneParams& p, Signals phi, double chi,
                                 const HormoneVector& inherited = {});

// Stateful integrator for one episode: delay queues, noise stream, current
// field. Advancing once covers one reasoning cycle.
class HormonalEngine {
 public:
  HormonalEngine(HormoneParams params, std::uint64_t seed);

  const HormoneVector& state() const { return h_; }
  const HormoneParams& params() const { return params_; }

  // Overwrites the five exogenous hormones; the regulated pair is kept.
  void set_inherited(const HormoneVector& inherited);

  // `confusion_damping` false zeroes rho_u for this cycle.
  const HormoneVector& advance(Signals phi, double chi, bool confusion_damping = true);

  // Delayed signals applied during the last advance (nullopt = quiescent).
  std::optional<double> last_clarity_signal() const { return last_c_; }
  std::optional<double> last_confusion_signal() const { return last_u_; }

 private:
  HormoneParams params_;
  HormoneVector h_;
  std::deque<std::optional<double>> queue_c_;
  std::deque<std::optional<double>> queue_u_;
  std::optional<double> last_c_;
  std::optional<double> last_u_;
  Rng rng_;
};

}  // namespace hrr
