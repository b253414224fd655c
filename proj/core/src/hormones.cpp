#include "hrr/hormones.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

constexpr int kMaxEquilibriumSteps = 100000;
constexpr double kDriftTolerance = 1e-9;

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void validate_channel(const HormoneChannel& c, const std::string& name) {
  require(c.tau > 0.0, "tau_" + name + " must be > 0");
  require(c.lambda > 0.0 && c.lambda < 1.0, "lambda_" + name + " must lie in (0,1)");
  require(c.delay >= 0, "delta_" + name + " must be >= 0");
  require(c.rho >= 0.0 && c.rho < 1.0, "rho_" + name + " must lie in [0,1)");
  require(c.sigma_eta >= 0.0, "sigma_eta_" + name + " must be >= 0");
  require(c.gain > 0.0, "a_k must be > 0");
  require(std::isfinite(c.bias), "b_k must be finite");
  require(c.amplitude > 0.0, "amp_" + name + " must be > 0");
}

// Components of the projected drift that can still move the state.
double projected(double h, double d) {
  if (h <= 0.0 && d < 0.0) return 0.0;
  if (h >= 1.0 && d > 0.0) return 0.0;
  return d;
}

HormoneVector em_step(const HormoneVector& h, Emissions e, double chi,
                      const HormoneParams& p, double dt, Noise noise) {
  const Drift d = drift(h, e, chi, p);
  const double sq = std::sqrt(dt);
  HormoneVector next = h;
  next.clarity = clip01(h.clarity + dt * d.clarity + sq * p.clarity.sigma_eta * noise.clarity);
  next.confusion =
      clip01(h.confusion + dt * d.confusion + sq * p.confusion.sigma_eta * noise.confusion);
  return next;
}

Emissions closed_loop_emissions(const HormoneVector& h, std::optional<double> phi_c,
                                std::optional<double> phi_u, const HormoneParams& p) {
  Emissions e;
  if (phi_c) e.clarity = p.clarity.amplitude * emit(*phi_c, h.clarity, p.clarity.gain, p.clarity.bias);
  if (phi_u)
    e.confusion =
        p.confusion.amplitude * emit(*phi_u, h.confusion, p.confusion.gain, p.confusion.bias);
  return e;
}

}  // namespace

bool HormoneVector::valid() const {
  const auto a = to_array();
  return std::all_of(a.begin(), a.end(), in_unit);
}

void HormoneParams::validate() const {
  validate_channel(clarity, "c");
  validate_channel(confusion, "u");
  require(gamma_cu >= 0.0 && gamma_cu < 1.0, "gamma_cu must lie in [0,1)");
  require(gamma_uc >= 0.0 && gamma_uc < 1.0, "gamma_uc must lie in [0,1)");
  require(gamma_cur_u >= 0.0 && gamma_cur_u < 1.0, "gamma_cur_u must lie in [0,1)");
  require(gamma_inh_c >= 0.0 && gamma_inh_c < 1.0, "gamma_inh_c must lie in [0,1)");
  require(dt > 0.0, "dt must be > 0");
  require(substeps >= 1, "substeps must be >= 1");
}

void EmissionWeights::validate() const {
  auto check = [](double a, double b, double c, const char* name) {
    require(a >= 0.0 && b >= 0.0 && c >= 0.0,
            std::string(name) + " emission weights must be non-negative");
    require(std::abs(a + b + c - 1.0) <= 1e-9,
            std::string(name) + " emission weights must sum to 1");
  };
  check(alpha_u, beta_u, gamma_u, "confusion");
  check(alpha_c, beta_c, gamma_c, "clarity");
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

double emit(double phi, double h, double gain, double bias) {
  return sigmoid(gain * phi + bias) * (1.0 - h);
}

double phi_confusion(double entropy_norm, double err_norm, double conf_max,
                     const EmissionWeights& w) {
  return clip01(w.alpha_u * entropy_norm + w.beta_u * err_norm + w.gamma_u * (1.0 - conf_max));
}

double phi_clarity(double entropy_norm, double err_norm, double cos_align,
                   const EmissionWeights& w) {
  const double direction = (std::clamp(cos_align, -1.0, 1.0) + 1.0) * 0.5;
  return clip01(w.alpha_c * (1.0 - entropy_norm) + w.beta_c * (1.0 - err_norm) +
                w.gamma_c * direction);
}

Drift drift(const HormoneVector& h, Emissions e, double chi, const HormoneParams& p) {
  const double hc = h.clarity;
  const double hu = h.confusion;
  const double inherited_c = p.gamma_inh_c * h.inhibition * (1.0 - hc);
  const double inherited_u = p.gamma_cur_u * h.curiosity * (1.0 - hu);
  Drift d;
  d.clarity = (-p.clarity.lambda * hc + e.clarity - p.gamma_cu * hc * hu -
               p.clarity.rho * chi * hc + inherited_c) /
              p.clarity.tau;
  d.confusion = (-p.confusion.lambda * hu + e.confusion - p.gamma_uc * hu * hc -
                 p.confusion.rho * chi * hu + inherited_u) /
                p.confusion.tau;
  return d;
}

HormoneVector step_dynamics(const HormoneVector& h, Emissions delayed, double chi,
                            const HormoneParams& p, Noise noise) {
  const double bound = dt_bound(p, 1.0);
  if (!(p.dt < bound)) {
    std::ostringstream os;
    os << "dt=" << p.dt << " violates the explicit-step bound dt < " << bound;
    throw ConfigError(os.str());
  }
  return em_step(h, delayed, chi, p, p.dt, noise);
}

StabilityReport check_stability(const HormoneParams& p, double chi_max) {
  StabilityReport r;
  r.clarity = {"c", p.clarity.lambda, p.gamma_cu + p.clarity.rho * chi_max, false};
  r.clarity.pass = r.clarity.lhs > r.clarity.rhs;
  r.confusion = {"u", p.confusion.lambda, p.gamma_uc + p.confusion.rho * chi_max, false};
  r.confusion.pass = r.confusion.lhs > r.confusion.rhs;
  return r;
}

DtBounds dt_bounds(const HormoneParams& p, double chi_max) {
  DtBounds b;
  b.clarity = 2.0 * p.clarity.tau / (p.clarity.lambda + p.gamma_cu + p.clarity.rho * chi_max);
  b.confusion =
      2.0 * p.confusion.tau / (p.confusion.lambda + p.gamma_uc + p.confusion.rho * chi_max);
  return b;
}

double dt_bound(const HormoneParams& p, double chi_max) { return dt_bounds(p, chi_max).overall(); }

double lyapunov(const HormoneVector& h, Equilibrium star, const HormoneParams& p) {
  const double dc = h.clarity - star.clarity;
  const double du = h.confusion - star.confusion;
  return 0.5 * (p.clarity.tau * dc * dc + p.confusion.tau * du * du);
}

Equilibrium estimate_equilibrium(const HormoneParams& p, Emissions e, double chi,
                                 const HormoneVector& inherited) {
  HormoneVector h = inherited;
  h.clarity = 0.0;
  h.confusion = 0.0;
  for (int step = 0; step < kMaxEquilibriumSteps; ++step) {
    const Drift d = drift(h, e, chi, p);
    if (std::abs(projected(h.clarity, d.clarity)) < kDriftTolerance &&
        std::abs(projected(h.confusion, d.confusion)) < kDriftTolerance) {
      return {h.clarity, h.confusion};
    }
    h = step_dynamics(h, e, chi, p, {});
  }
  throw std::runtime_error("estimate_equilibrium: no convergence after 1e5 steps");
}

Equilibrium estimate_equilibrium(const HormoneParams& p, Signals phi, double chi,
                                 const HormoneVector& inherited) {
  HormoneVector h = inherited;
  h.clarity = 0.0;
  h.confusion = 0.0;
  const double dt = p.dt / p.substeps;
  for (int step = 0; step < kMaxEquilibriumSteps; ++step) {
    const Emissions e = closed_loop_emissions(h, phi.clarity, phi.confusion, p);
    const Drift d = drift(h, e, chi, p);
    if (std::abs(projected(h.clarity, d.clarity)) < kDriftTolerance &&
        std::abs(projected(h.confusion, d.confusion)) < kDriftTolerance) {
      return {h.clarity, h.confusion};
    }
    h = em_step(h, e, chi, p, dt, {});
  }
  throw std::runtime_error("estimate_equilibrium: no convergence after 1e5 steps");
}

HormonalEngine::HormonalEngine(HormoneParams params, std::uint64_t seed)
    : params_(params), rng_(seed) {
  params_.validate();
  if (!(params_.dt < dt_bound(params_, 1.0))) {
    throw ConfigError("dt is not below the explicit-step bound");
  }
  queue_c_.assign(static_cast<std::size_t>(params_.clarity.delay), std::nullopt);
  queue_u_.assign(static_cast<std::size_t>(params_.confusion.delay), std::nullopt);
}

void HormonalEngine::set_inherited(const HormoneVector& inherited) {
  h_.confidence = inherited.confidence;
  h_.inhibition = inherited.inhibition;
  h_.curiosity = inherited.curiosity;
  h_.energy = inherited.energy;
  h_.alertness = inherited.alertness;
}

const HormoneVector& HormonalEngine::advance(Signals phi, double chi, bool confusion_damping) {
  queue_c_.push_back(phi.clarity);
  queue_u_.push_back(phi.confusion);
  last_c_ = queue_c_.front();
  last_u_ = queue_u_.front();
  queue_c_.pop_front();
  queue_u_.pop_front();

  HormoneParams p = params_;
  if (!confusion_damping) p.confusion.rho = 0.0;
  const double dt = p.dt / p.substeps;
  for (int k = 0; k < p.substeps; ++k) {
    const Emissions e = closed_loop_emissions(h_, last_c_, last_u_, p);
    Noise noise;
    if (p.clarity.sigma_eta > 0.0) noise.clarity = rng_.normal();
    if (p.confusion.sigma_eta > 0.0) noise.confusion = rng_.normal();
    h_ = em_step(h_, e, chi, p, dt, noise);
  }
  return h_;
}

}  // namespace hrr
