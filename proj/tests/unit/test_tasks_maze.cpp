#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "hrr/rrc.hpp"
#include "hrr/tasks/maze.hpp"

namespace hrr {
namespace {

MazeInstance open_grid(int rows, int cols, int start, int goal) {
  MazeInstance m;
  m.rows = rows;
  m.cols = cols;
  m.blocked.assign(static_cast<std::size_t>(rows * cols), false);
  m.start = start;
  m.goal = goal;
  return m;
}

EpisodeTrace solve(const MazeInstance& m, std::uint64_t seed = 1) {
  const MazeTask task(m);
  EngramStore store;
  return run_episode(task, EpisodeConfig{}, store, seed);
}

std::set<std::string> names(const std::vector<Violation>& v) {
  std::set<std::string> out;
  for (const Violation& x : v) out.insert(x.constraint);
  return out;
}

TEST(Maze, BfsDistances) {
  const MazeInstance m = open_grid(3, 3, 0, 8);
  EXPECT_EQ(bfs_distance(m), 4);
  const std::vector<int> d = bfs_to_goal(m);
  EXPECT_EQ(d[8], 0);
  EXPECT_EQ(d[0], 4);
  MazeInstance walled = m;
  walled.blocked[5] = walled.blocked[7] = true;
  EXPECT_EQ(bfs_distance(walled), -1);
}

TEST(Maze, OpenGridConvergesToManhattanPath) {
  const MazeInstance m = open_grid(3, 3, 0, 8);
  const EpisodeTrace tr = solve(m);
  const std::vector<int> path = MazeTask::path_of(tr.cycles.back().y);
  EXPECT_EQ(static_cast<int>(path.size()) - 1, 4);
  EXPECT_TRUE(tr.correct);
}

TEST(Maze, AdjacentGoalAfterFirstCycle) {
  const MazeInstance m = open_grid(3, 3, 4, 5);
  const EpisodeTrace tr = solve(m);
  const std::vector<int> path = MazeTask::path_of(tr.cycles[1].y);
  EXPECT_EQ(path, (std::vector<int>{4, 5}));
}

TEST(Maze, SingleCorridorIsFollowed) {
  // 3 x 5 serpentine: the only route snakes through every open cell.
  MazeInstance m = open_grid(3, 5, 0, 14);
  m.blocked[static_cast<std::size_t>(m.cell(1, 0))] = true;
  m.blocked[static_cast<std::size_t>(m.cell(1, 1))] = true;
  m.blocked[static_cast<std::size_t>(m.cell(1, 2))] = true;
  m.blocked[static_cast<std::size_t>(m.cell(1, 3))] = true;
  m.start = m.cell(0, 0);
  m.goal = m.cell(2, 0);
  const std::vector<int> corridor{0, 1, 2, 3, 4, 9, 14, 13, 12, 11, 10};
  ASSERT_EQ(bfs_distance(m), static_cast<int>(corridor.size()) - 1);
  // Drive the potential field to its fixed point with the sweep agent alone.
  const MazeTask task(m);
  CognitiveState s = task.encode();
  const HypothesisSet hyp;
  for (int k = 0; k < 200; ++k) {
    const AgentDelta d = task.delta(AgentId::R1A, s, task.decode(s), hyp);
    for (std::size_t c = 0; c < s.size(); ++c) s[c] += 0.3 * d.delta[c];
    s = task.project(s);
  }
  EXPECT_EQ(MazeTask::path_of(task.decode(s)), corridor);
  const std::vector<int> dist = bfs_to_goal(m);
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (dist[c] >= 0) EXPECT_NEAR(s[c], std::pow(MazeTask::kGamma, dist[c]), 1e-9);
  }
}

TEST(Maze, GeneratorDeterministicAndSolvable) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MazeInstance a = generate_maze(seed);
    const MazeInstance b = generate_maze(seed);
    EXPECT_EQ(a.blocked, b.blocked);
    EXPECT_EQ(a.start, b.start);
    EXPECT_EQ(a.goal, b.goal);
    EXPECT_NE(a.start, a.goal);
    EXPECT_GT(bfs_distance(a), 0);
    EXPECT_FALSE(a.blocked[static_cast<std::size_t>(a.start)]);
  }
}

TEST(Maze, DecodedPathsAreAdjacentSteps) {
  const MazeTask task(generate_maze(5));
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    CognitiveState s(task.dimension());
    for (double& x : s) x = rng.uniform();
    const std::vector<int> path = MazeTask::path_of(task.decode(s));
    ASSERT_FALSE(path.empty());
    EXPECT_EQ(path.front(), task.instance().start);
    const int cols = task.instance().cols;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const int dr = std::abs(path[i] / cols - path[i - 1] / cols);
      const int dc = std::abs(path[i] % cols - path[i - 1] % cols);
      EXPECT_EQ(dr + dc, 1);
    }
  }
}

TEST(Maze, AxiomMutationReportsExactlyOne) {
  const MazeInstance m = open_grid(3, 3, 0, 8);
  const MazeTask task(m);
  Output y(9, 0.0);
  const std::vector<int> route{0, 1, 2, 5, 8};
  for (std::size_t i = 0; i < route.size(); ++i) y[static_cast<std::size_t>(route[i])] = static_cast<double>(i + 1);
  EXPECT_TRUE(task.axioms(y).empty());
  EXPECT_TRUE(task.is_correct(y));

  Output short_of_goal = y;
  short_of_goal[8] = 0.0;
  EXPECT_EQ(names(task.axioms(short_of_goal)), (std::set<std::string>{"goal"}));

  Output gap = y;
  gap[5] = 5.0;
  gap[8] = 6.0;
  EXPECT_EQ(names(task.axioms(gap)), (std::set<std::string>{"contiguous"}));

  MazeInstance blocked = m;
  blocked.blocked[2] = true;
  const MazeTask walled(blocked);
  EXPECT_EQ(names(walled.axioms(y)), (std::set<std::string>{"obstacle"}));

  Output jump(9, 0.0);
  jump[0] = 1;
  jump[2] = 2;
  jump[5] = 3;
  jump[8] = 4;
  EXPECT_EQ(names(task.axioms(jump)), (std::set<std::string>{"adjacency"}));
}

TEST(Maze, ClaimedCorrectPathsMatchBfs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MazeInstance m = generate_maze(seed);
    const EpisodeTrace tr = solve(m, seed);
    if (!tr.correct) continue;
    EXPECT_EQ(static_cast<int>(MazeTask::path_of(tr.cycles.back().y).size()) - 1, bfs_distance(m));
  }
}

}  // namespace
}  // namespace hrr
