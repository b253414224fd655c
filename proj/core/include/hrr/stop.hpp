#pragma once

#include "hrr/hormones.hpp"
#include "hrr/observe.hpp"

namespace hrr {

struct StoppingThresholds {
  double eps_s = 1e-3;
  double theta_c = 0.70;
  double theta_u = 0.30;

  void validate() const;
};

// True iff |s_t - s_prev| <= eps_s, h_c >= theta_c and h_u <= theta_u.
bool should_stop(const CognitiveState& s_t, const CognitiveState& s_prev, const HormoneVector& h,
                 const StoppingThresholds& thr);

}  // namespace hrr
