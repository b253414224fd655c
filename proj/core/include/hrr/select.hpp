#pragma once

// Budget-constrained agent selection: exact 0-1 knapsack by enumeration and
// a primal-dual projected-gradient path with rounding and repair.

#include <cstddef>
#include <vector>

namespace hrr {

struct Candidate {
  int id = 0;
  double utility = 0.0;
  double cost = 1.0;  // > 0
};

struct SelectionProblem {
  std::vector<Candidate> candidates;
  double budget = 0.0;
};

struct SelectionResult {
  std::vector<int> chosen;  // ascending ids
  double total_utility = 0.0;
  double total_cost = 0.0;
  double mu = 0.0;  // final dual price (primal-dual path only)
};

inline constexpr std::size_t kExactCap = 20;

// Utility-maximal feasible subset. Ties go to the lower total cost, then the
// lexicographically smaller id list. Throws std::length_error above kExactCap.
SelectionResult solve_exact(const SelectionProblem& problem);

struct PrimalDualParams {
  int steps = 2000;
  double alpha_x = 0.10;
  double alpha_mu = 0.05;
  double mu_max = 10.0;

  void validate() const;
};

// Projected primal-dual iteration on the LP relaxation, threshold rounding at
// 0.5, greedy repair dropping the lowest utility/cost ratio until the budget
// holds, then greedy completion by ratio into the leftover budget. Always
// feasible.
SelectionResult solve_primal_dual(const SelectionProblem& problem,
                                  const PrimalDualParams& params = {});

// B(t) = b_max (1 - beta_b h_ene), never negative.
double cycle_budget(double b_max, double h_ene, double beta_b);

}  // namespace hrr
