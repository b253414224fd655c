#pragma once

// Grid shortest path. The state is a potential field over cells whose fixed
// point is gamma^dist(cell, goal); the output is the greedy ascent path from
// the start, encoded as step indices (1 = start) per cell.

#include <cstdint>
#include <vector>

#include "hrr/task.hpp"

namespace hrr {

struct MazeInstance {
  int rows = 25;
  int cols = 25;
  std::vector<bool> blocked;  // row-major
  int start = 0;
  int goal = 0;

  int cell(int r, int c) const { return r * cols + c; }
};

// Shortest-path length in moves, or -1 when the goal is unreachable.
int bfs_distance(const MazeInstance& m);
// Distances from every cell to the goal (-1 = unreachable or blocked).
std::vector<int> bfs_to_goal(const MazeInstance& m);

// 25 x 25 with round(0.40 * cells) obstacles; start and goal are distinct
// free cells; redrawn until the goal is reachable.
MazeInstance generate_maze(std::uint64_t seed, int rows = 25, int cols = 25, double density = 0.40);

class MazeTask final : public Task {
 public:
  static constexpr double kGamma = 0.97;
  static constexpr double kGain = 3.0;
  static constexpr int kSweeps = 8;
  static constexpr int kLocalRadius = 3;
  static constexpr double kSoftmaxTemperature = 0.02;

  explicit MazeTask(MazeInstance instance);

  std::string_view name() const override { return "maze"; }
  std::size_t dimension() const override;
  CognitiveState encode() const override;
  CognitiveState project(const CognitiveState& s) const override;
  Output decode(const CognitiveState& s) const override;
  AgentDelta delta(AgentId agent, const CognitiveState& s, const Output& y,
                   const HypothesisSet& hypotheses) const override;
  OutputDistribution distribution(const CognitiveState& s, const Output& y) const override;
  std::vector<Violation> axioms(const Output& y) const override;
  std::size_t axiom_count() const override { return 5; }
  bool is_correct(const Output& y) const override;
  ContextSignature context() const override;

  const MazeInstance& instance() const { return instance_; }
  int shortest() const { return shortest_; }

  // Cells of the encoded path in step order.
  static std::vector<int> path_of(const Output& y);
  std::vector<int> neighbours(int cell) const;
  // Cells that can lie on no simple start-goal path (iterated dead-end fill).
  std::vector<bool> dead_ends() const;

 private:
  CognitiveState bellman(const CognitiveState& s, int sweeps, const std::vector<bool>* mask) const;

  MazeInstance instance_;
  int shortest_ = -1;
  std::vector<std::vector<int>> adjacency_;
  std::vector<bool> dead_;
};

}  // namespace hrr
