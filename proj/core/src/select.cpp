#include "hrr/select.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

constexpr double kTie = 1e-12;

SelectionResult summarise(const SelectionProblem& problem, const std::vector<std::size_t>& picks) {
  SelectionResult r;
  for (std::size_t i : picks) {
    const Candidate& c = problem.candidates[i];
    r.chosen.push_back(c.id);
    r.total_utility += c.utility;
    r.total_cost += c.cost;
  }
  std::sort(r.chosen.begin(), r.chosen.end());
  return r;
}

void validate_problem(const SelectionProblem& problem) {
  for (const Candidate& c : problem.candidates) {
    if (!(c.cost > 0.0)) throw std::invalid_argument("selection: candidate cost must be > 0");
  }
  if (!(problem.budget >= 0.0)) throw std::invalid_argument("selection: budget must be >= 0");
}

bool better(const SelectionResult& a, const SelectionResult& b) {
  if (a.total_utility > b.total_utility + kTie) return true;
  if (a.total_utility < b.total_utility - kTie) return false;
  if (a.total_cost < b.total_cost - kTie) return true;
  if (a.total_cost > b.total_cost + kTie) return false;
  return a.chosen < b.chosen;
}

}  // namespace

SelectionResult solve_exact(const SelectionProblem& problem) {
  validate_problem(problem);
  const std::size_t n = problem.candidates.size();
  if (n > kExactCap) throw std::length_error("solve_exact: too many candidates for enumeration");

  SelectionResult best;
  std::vector<std::size_t> picks;
  const std::uint32_t subsets = 1u << n;
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    double cost = 0.0;
    picks.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        cost += problem.candidates[i].cost;
        picks.push_back(i);
      }
    }
    if (cost > problem.budget + kTie) continue;
    SelectionResult r = summarise(problem, picks);
    if (better(r, best)) best = std::move(r);
  }
  return best;
}

void PrimalDualParams::validate() const {
  if (steps < 1) throw ConfigError("primal-dual steps must be >= 1");
  if (!(alpha_x > 0.0)) throw ConfigError("alpha_x must be > 0");
  if (!(alpha_mu > 0.0)) throw ConfigError("alpha_mu must be > 0");
  if (!(mu_max > 0.0)) throw ConfigError("mu_max must be > 0");
}

SelectionResult solve_primal_dual(const SelectionProblem& problem, const PrimalDualParams& params) {
  validate_problem(problem);
  params.validate();
  const std::size_t n = problem.candidates.size();
  std::vector<double> x(n, 0.0);
  double mu = 0.0;
  for (int step = 0; step < params.steps; ++step) {
    double load = 0.0;
    for (std::size_t i = 0; i < n; ++i) load += problem.candidates[i].cost * x[i];
    for (std::size_t i = 0; i < n; ++i) {
      const Candidate& c = problem.candidates[i];
      x[i] = std::clamp(x[i] + params.alpha_x * (c.utility - mu * c.cost), 0.0, 1.0);
    }
    mu = std::clamp(mu + params.alpha_mu * (load - problem.budget), 0.0, params.mu_max);
  }

  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > 0.5) picks.push_back(i);
  }
  auto ratio = [&](std::size_t i) {
    return problem.candidates[i].utility / problem.candidates[i].cost;
  };
  // Highest ratio first; ties keep the lower id.
  std::sort(picks.begin(), picks.end(), [&](std::size_t a, std::size_t b) {
    if (ratio(a) != ratio(b)) return ratio(a) > ratio(b);
    return problem.candidates[a].id < problem.candidates[b].id;
  });
  double cost = 0.0;
  for (std::size_t i : picks) cost += problem.candidates[i].cost;
  while (!picks.empty() && cost > problem.budget + kTie) {
    cost -= problem.candidates[picks.back()].cost;
    picks.pop_back();
  }
  // Greedy completion with whatever budget the rounding left unused.
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::find(picks.begin(), picks.end(), i) == picks.end()) rest.push_back(i);
  }
  std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    if (ratio(a) != ratio(b)) return ratio(a) > ratio(b);
    return problem.candidates[a].id < problem.candidates[b].id;
  });
  for (std::size_t i : rest) {
    const Candidate& c = problem.candidates[i];
    if (c.utility > 0.0 && cost + c.cost <= problem.budget + kTie) {
      picks.push_back(i);
      cost += c.cost;
    }
  }
  SelectionResult r = summarise(problem, picks);
  r.mu = mu;
  return r;
}

double cycle_budget(double b_max, double h_ene, double beta_b) {
  return std::max(0.0, b_max * (1.0 - beta_b * h_ene));
}

}  // namespace hrr
