#pragma once

#include <cstdint>
#include <random>

namespace hrr {

// Seedable source used everywhere a run needs randomness.
//
// Engine: std::mt19937_64 (bit-exact across standard libraries).
// Uniforms: top 53 bits of one engine output scaled to [0,1).
// Normals: Box-Muller on two uniforms, the second variate cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], via rejection to avoid modulo bias.
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

  double normal();

  // Independent child stream, e.g. one per episode.
  Rng fork(std::uint64_t salt);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// SplitMix64 finaliser; mixes seeds for derived streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace hrr
