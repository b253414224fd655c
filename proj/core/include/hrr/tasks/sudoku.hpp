#pragma once

// Sudoku as a candidate-probability tensor: s[cell * n + digit] in [0,1] for
// an n x n grid (n = box^2), refined by soft elimination and propagation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrr/task.hpp"

namespace hrr {

enum class Difficulty { standard, extreme };

struct SudokuInstance {
  int box = 3;             // n = box * box
  std::vector<int> cells;  // n*n digits, 0 = blank

  int n() const { return box * box; }
  int clue_count() const;
};

// 81 characters, digits 1-9 with '0' or '.' for blanks.
SudokuInstance parse_sudoku(const std::string& digits);
std::string format_sudoku(const SudokuInstance& inst);

// Backtracking (fewest-candidates cell first); stops once `limit` solutions
// are found. The first solution is stored in `first` when non-null.
int count_solutions(const SudokuInstance& inst, int limit, std::vector<int>* first = nullptr);

// Unique-solution puzzle: a random full grid, then clue removal in random
// order while uniqueness holds, down to a clue count drawn from 28-36
// (standard) or 22-26 (extreme) for 9x9, scaled by area for other sizes.
// The extreme tier stops early if no further clue can be removed.
SudokuInstance generate_sudoku(std::uint64_t seed, Difficulty difficulty = Difficulty::standard,
                               int box = 3);

class SudokuTask final : public Task {
 public:
  static constexpr double kGain = 3.0;
  static constexpr double kTemperature = 0.1;
  static constexpr double kCommit = 0.9;

  explicit SudokuTask(SudokuInstance instance);

  std::string_view name() const override { return "sudoku"; }
  std::size_t dimension() const override;
  CognitiveState encode() const override;
  CognitiveState project(const CognitiveState& s) const override;
  Output decode(const CognitiveState& s) const override;
  AgentDelta delta(AgentId agent, const CognitiveState& s, const Output& y,
                   const HypothesisSet& hypotheses) const override;
  OutputDistribution distribution(const CognitiveState& s, const Output& y) const override;
  std::vector<Violation> axioms(const Output& y) const override;
  std::size_t axiom_count() const override;
  bool is_correct(const Output& y) const override;
  ContextSignature context() const override;

  const SudokuInstance& instance() const { return instance_; }
  const std::vector<int>& solution() const { return solution_; }

  // Candidate domains after propagation from givens and committed cells
  // (bit d set = digit d+1 alive); contradicted cells are reported and keep
  // the candidates their distribution still supports.
  struct Domains {
    std::vector<std::uint32_t> alive;
    std::vector<int> contradicted;
  };
  Domains propagate(const CognitiveState& s) const;

  // Probabilities of one cell renormalised to sum 1 (uniform if all zero).
  std::vector<double> cell_distribution(const CognitiveState& s, int cell) const;

 private:
  CognitiveState mean_field_target(const CognitiveState& s) const;
  CognitiveState propagation_target(const CognitiveState& s, std::vector<Violation>& violations) const;
  CognitiveState commitment_target(const CognitiveState& s) const;
  std::string cell_name(int cell) const;

  SudokuInstance instance_;
  int n_ = 9;
  std::vector<int> solution_;
  std::vector<std::vector<int>> units_;  // rows, columns, boxes
  std::vector<std::vector<int>> peers_;
  std::vector<std::string> unit_names_;
};

}  // namespace hrr
