#include "hrr/observe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

constexpr double kZeroNorm = 1e-12;

double norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

void fill_distribution_fields(Observation& o, const OutputDistribution& p) {
  const Entropy e = shannon_entropy(p);
  o.entropy = e.nats;
  o.entropy_norm = e.norm;
  if (p.empty()) return;
  o.conf_max = std::clamp(*std::max_element(p.begin(), p.end()), 0.0, 1.0);
  const double mean = 1.0 / static_cast<double>(p.size());
  double var = 0.0;
  for (double x : p) var += (x - mean) * (x - mean);
  o.confidence_variance = var / static_cast<double>(p.size());
}

}  // namespace

void ObservationParams::validate() const {
  if (window < 1) throw ConfigError("window must be >= 1");
  if (!(ema_decay >= 0.0 && ema_decay < 1.0)) throw ConfigError("ema_decay must lie in [0,1)");
  if (!(err_floor > 0.0)) throw ConfigError("err_floor must be > 0");
}

double residual_error(const CognitiveState& s, const CognitiveState& s_prev) {
  if (s.size() != s_prev.size()) throw std::invalid_argument("residual_error: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s[i] - s_prev[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Entropy shannon_entropy(const OutputDistribution& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  Entropy e;
  if (p.size() <= 1) return e;
  const double cap = std::log(static_cast<double>(p.size()));
  e.nats = std::clamp(h, 0.0, cap);
  e.norm = std::clamp(e.nats / cap, 0.0, 1.0);
  return e;
}

Direction update_direction(const std::vector<double>& delta_s,
                           const std::vector<double>& d_conv_prev, double ema_decay) {
  Direction out;
  out.d_conv = d_conv_prev;
  const double nd = norm2(delta_s);
  if (nd < kZeroNorm) return out;
  if (d_conv_prev.empty()) {
    out.d_conv.resize(delta_s.size());
    for (std::size_t i = 0; i < delta_s.size(); ++i) out.d_conv[i] = delta_s[i] / nd;
    return out;
  }
  if (d_conv_prev.size() != delta_s.size())
    throw std::invalid_argument("update_direction: dimension mismatch");
  const double np = norm2(d_conv_prev);
  if (np < kZeroNorm) return out;
  const double dot = std::inner_product(delta_s.begin(), delta_s.end(), d_conv_prev.begin(), 0.0);
  out.cos_align = std::clamp(dot / (nd * np), -1.0, 1.0);

  std::vector<double> mixed(delta_s.size());
  for (std::size_t i = 0; i < delta_s.size(); ++i) {
    mixed[i] = ema_decay * d_conv_prev[i] / np + (1.0 - ema_decay) * delta_s[i] / nd;
  }
  const double nm = norm2(mixed);
  if (nm >= kZeroNorm) {
    for (double& x : mixed) x /= nm;
    out.d_conv = std::move(mixed);
  }
  return out;
}

double hamming_fraction(const Output& a, const Output& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_fraction: length mismatch");
  if (a.empty()) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) ++diff;
  }
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

Observation initial_observation(const OutputDistribution& p, double consistency) {
  Observation o;
  fill_distribution_fields(o, p);
  o.err_norm = 1.0;
  o.consistency = std::clamp(consistency, 0.0, 1.0);
  return o;
}

Observation build_observation(const CognitiveState& s_t, const CognitiveState& s_prev,
                              const OutputDistribution& p, const Output& y_t,
                              const Output& y_prev, double consistency,
                              ObservationHistory& history, const ObservationParams& params) {
  Observation o;
  const bool first = history.cycles == 0;

  o.err_abs = residual_error(s_t, s_prev);
  o.update_norm = o.err_abs;
  history.err_max = std::max({history.err_max, o.err_abs, params.err_floor});
  o.err_norm = std::clamp(o.err_abs / history.err_max, 0.0, 1.0);
  if (!first && !history.errors.empty() && history.errors.back() > kZeroNorm) {
    o.err_rel = o.err_abs / history.errors.back();
  } else {
    o.err_rel = 1.0;
  }
  history.errors.push_back(o.err_abs);
  while (static_cast<int>(history.errors.size()) > params.window) history.errors.pop_front();
  o.err_ma = std::accumulate(history.errors.begin(), history.errors.end(), 0.0) /
             static_cast<double>(history.errors.size());

  fill_distribution_fields(o, p);
  o.entropy_rate = first ? 0.0 : o.entropy - history.prev_entropy;
  history.prev_entropy = o.entropy;

  std::vector<double> delta(s_t.size());
  for (std::size_t i = 0; i < s_t.size(); ++i) delta[i] = s_t[i] - s_prev[i];
  Direction dir = update_direction(delta, history.d_conv, params.ema_decay);
  o.cos_align = first ? 0.0 : dir.cos_align;
  history.d_conv = std::move(dir.d_conv);

  o.consistency = std::clamp(consistency, 0.0, 1.0);
  o.output_hamming = y_prev.empty() ? 0.0 : hamming_fraction(y_t, y_prev);
  ++history.cycles;
  return o;
}

}  // namespace hrr
