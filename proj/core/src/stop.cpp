#include "hrr/stop.hpp"

#include "hrr/errors.hpp"

namespace hrr {

void StoppingThresholds::validate() const {
  if (!(eps_s > 0.0)) throw ConfigError("eps_s must be > 0");
  if (!(theta_c > 0.0 && theta_c < 1.0)) throw ConfigError("theta_c must lie in (0,1)");
  if (!(theta_u > 0.0 && theta_u < 1.0)) throw ConfigError("theta_u must lie in (0,1)");
}

bool should_stop(const CognitiveState& s_t, const CognitiveState& s_prev, const HormoneVector& h,
                 const StoppingThresholds& thr) {
  return residual_error(s_t, s_prev) <= thr.eps_s && h.clarity >= thr.theta_c &&
         h.confusion <= thr.theta_u;
}

}  // namespace hrr
