#pragma once

// Observation vector O_R(t): residual error, entropy, update geometry and
// provisional-output quality, built from consecutive cognitive states.

#include <cstddef>
#include <deque>
#include <vector>

namespace hrr {

// Reasoning state s_t in [0,1]^d.
using CognitiveState = std::vector<double>;

// Candidate-output probabilities p_i (non-negative, summing to 1).
using OutputDistribution = std::vector<double>;

// Canonical numeric encoding of a task output y_t.
using Output = std::vector<double>;

struct ObservationParams {
  int window = 5;
  double ema_decay = 0.8;
  double err_floor = 1e-9;

  void validate() const;
};

struct Observation {
  // Residual block.
  double err_abs = 0.0;   // raw update magnitude
  double err_norm = 0.0;  // err_abs / running max
  double err_rel = 1.0;   // err_abs / previous err_abs
  double err_ma = 0.0;    // window mean of err_abs
  // Entropy block.
  double entropy = 0.0;  // nats
  double entropy_norm = 0.0;
  double entropy_rate = 0.0;
  double confidence_variance = 0.0;  // logged only
  // Progression block.
  double update_norm = 0.0;
  double cos_align = 0.0;
  // Output block.
  double conf_max = 0.0;
  double consistency = 1.0;
  double output_hamming = 0.0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

double residual_error(const CognitiveState& s, const CognitiveState& s_prev);

struct Entropy {
  double nats = 0.0;
  double norm = 0.0;
};

// Natural-log entropy with 0 log 0 = 0, normalised by ln|Y| (0 when |Y| <= 1).
Entropy shannon_entropy(const OutputDistribution& p);

struct Direction {
  double cos_align = 0.0;
  std::vector<double> d_conv;
};

// Cosine against the running direction and the updated EMA direction.
// A near-zero vector on either side yields cos 0 and leaves d_conv unchanged
// (an empty d_conv_prev is seeded with the normalised update).
Direction update_direction(const std::vector<double>& delta_s,
                           const std::vector<double>& d_conv_prev, double ema_decay);

// Fraction of positions where the two encodings differ; lengths must match.
double hamming_fraction(const Output& a, const Output& b);

// Per-episode memory feeding build_observation.
struct ObservationHistory {
  std::deque<double> errors;
  double err_max = 0.0;
  double prev_entropy = 0.0;
  std::vector<double> d_conv;
  int cycles = 0;
};

// Observation of the initial state, before any update exists: no residual
// yet, so the error signal is reported at its maximum (err_norm = 1).
Observation initial_observation(const OutputDistribution& p, double consistency);

Observation build_observation(const CognitiveState& s_t, const CognitiveState& s_prev,
                              const OutputDistribution& p, const Output& y_t,
                              const Output& y_prev, double consistency,
                              ObservationHistory& history, const ObservationParams& params);

}  // namespace hrr
