#include "hrr/tasks/maze.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numeric>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

void check_instance(const MazeInstance& m) {
  if (m.rows < 1 || m.cols < 1) throw TaskError("maze: empty grid");
  const int cells = m.rows * m.cols;
  if (static_cast<int>(m.blocked.size()) != cells) throw TaskError("maze: wrong cell count");
  if (m.start < 0 || m.start >= cells || m.goal < 0 || m.goal >= cells)
    throw TaskError("maze: start or goal outside the grid");
  if (m.start == m.goal) throw TaskError("maze: start equals goal");
  if (m.blocked[m.start] || m.blocked[m.goal]) throw TaskError("maze: start or goal blocked");
}

std::vector<int> free_neighbours(const MazeInstance& m, int cell) {
  std::vector<int> out;
  const int r = cell / m.cols;
  const int c = cell % m.cols;
  const int dr[4] = {-1, 0, 1, 0};
  const int dc[4] = {0, 1, 0, -1};
  for (int k = 0; k < 4; ++k) {
    const int nr = r + dr[k];
    const int nc = c + dc[k];
    if (nr < 0 || nr >= m.rows || nc < 0 || nc >= m.cols) continue;
    const int id = m.cell(nr, nc);
    if (!m.blocked[id]) out.push_back(id);
  }
  return out;
}

bool adjacent(const MazeInstance& m, int a, int b) {
  const int dr = std::abs(a / m.cols - b / m.cols);
  const int dc = std::abs(a % m.cols - b % m.cols);
  return dr + dc == 1;
}

}  // namespace

std::vector<int> bfs_to_goal(const MazeInstance& m) {
  std::vector<int> dist(m.blocked.size(), -1);
  std::deque<int> queue{m.goal};
  dist[m.goal] = 0;
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    for (int n : free_neighbours(m, c)) {
      if (dist[n] >= 0) continue;
      dist[n] = dist[c] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

int bfs_distance(const MazeInstance& m) { return bfs_to_goal(m)[m.start]; }

MazeInstance generate_maze(std::uint64_t seed, int rows, int cols, double density) {
  Rng rng(seed);
  const int cells = rows * cols;
  const int obstacles = static_cast<int>(std::lround(density * cells));
  if (obstacles > cells - 2) throw TaskError("maze: density leaves no room for start and goal");
  for (;;) {
    MazeInstance m;
    m.rows = rows;
    m.cols = cols;
    std::vector<int> order(static_cast<std::size_t>(cells));
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i) - 1))]);
    }
    m.blocked.assign(static_cast<std::size_t>(cells), false);
    for (int i = 0; i < obstacles; ++i) m.blocked[order[i]] = true;
    m.start = order[obstacles];
    m.goal = order[obstacles + 1];
    if (bfs_distance(m) > 0) return m;
  }
}

MazeTask::MazeTask(MazeInstance instance) : instance_(std::move(instance)) {
  check_instance(instance_);
  shortest_ = bfs_distance(instance_);
  if (shortest_ < 0) throw TaskError("maze: goal unreachable");
  adjacency_.resize(instance_.blocked.size());
  for (std::size_t c = 0; c < instance_.blocked.size(); ++c) {
    if (!instance_.blocked[c]) adjacency_[c] = free_neighbours(instance_, static_cast<int>(c));
  }
  dead_.assign(instance_.blocked.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t c = 0; c < dead_.size(); ++c) {
      const int id = static_cast<int>(c);
      if (instance_.blocked[c] || dead_[c] || id == instance_.start || id == instance_.goal) continue;
      int alive = 0;
      for (int n : adjacency_[c]) {
        if (!dead_[n]) ++alive;
      }
      if (alive <= 1) {
        dead_[c] = true;
        changed = true;
      }
    }
  }
}

std::size_t MazeTask::dimension() const { return instance_.blocked.size(); }

std::vector<int> MazeTask::neighbours(int cell) const { return adjacency_[cell]; }

std::vector<bool> MazeTask::dead_ends() const { return dead_; }

CognitiveState MazeTask::encode() const {
  return project(CognitiveState(dimension(), 0.0));
}

CognitiveState MazeTask::project(const CognitiveState& s_in) const {
  if (s_in.size() != dimension()) throw TaskError("maze: state dimension mismatch");
  CognitiveState s = clip_unit(s_in);
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (instance_.blocked[c]) s[c] = 0.0;
  }
  s[instance_.goal] = 1.0;
  return s;
}

CognitiveState MazeTask::bellman(const CognitiveState& s, int sweeps,
                                 const std::vector<bool>* mask) const {
  CognitiveState v = s;
  for (int k = 0; k < sweeps; ++k) {
    CognitiveState next = v;
    for (std::size_t c = 0; c < v.size(); ++c) {
      const int id = static_cast<int>(c);
      if (instance_.blocked[c] || id == instance_.goal) continue;
      if (mask && !(*mask)[c]) continue;
      double best = 0.0;
      for (int n : adjacency_[c]) best = std::max(best, v[n]);
      next[c] = kGamma * best;
    }
    v = std::move(next);
  }
  return project(v);
}

Output MazeTask::decode(const CognitiveState& s) const {
  Output y(dimension(), 0.0);
  int cur = instance_.start;
  int step = 1;
  y[cur] = step;
  while (cur != instance_.goal) {
    int next = -1;
    double best = s[cur];
    for (int n : adjacency_[cur]) {
      if (s[n] > best) {
        best = s[n];
        next = n;
      }
    }
    if (next < 0) break;
    cur = next;
    y[cur] = ++step;
  }
  return y;
}

std::vector<int> MazeTask::path_of(const Output& y) {
  std::vector<std::pair<double, int>> steps;
  for (std::size_t c = 0; c < y.size(); ++c) {
    if (y[c] > 0.0) steps.emplace_back(y[c], static_cast<int>(c));
  }
  std::sort(steps.begin(), steps.end());
  std::vector<int> path;
  for (const auto& p : steps) path.push_back(p.second);
  return path;
}

AgentDelta MazeTask::delta(AgentId agent, const CognitiveState& s, const Output& y,
                           const HypothesisSet&) const {
  AgentDelta out;
  switch (agent) {
    case AgentId::R1A:
      out.delta = pull_towards(s, bellman(s, kSweeps, nullptr), kGain);
      break;
    case AgentId::R1C: {
      const std::vector<int> path = path_of(y);
      const int tip = path.empty() ? instance_.start : path.back();
      if (tip == instance_.goal) {
        out.delta.assign(s.size(), 0.0);
        break;
      }
      std::vector<bool> mask(s.size(), false);
      const int tr = tip / instance_.cols;
      const int tc = tip % instance_.cols;
      for (std::size_t c = 0; c < s.size(); ++c) {
        const int r = static_cast<int>(c) / instance_.cols;
        const int cc = static_cast<int>(c) % instance_.cols;
        mask[c] = std::abs(r - tr) + std::abs(cc - tc) <= kLocalRadius;
      }
      out.delta = pull_towards(s, bellman(s, kLocalRadius, &mask), kGain);
      break;
    }
    case AgentId::R1D: {
      CognitiveState target = s;
      for (std::size_t c = 0; c < s.size(); ++c) {
        if (dead_[c]) target[c] = 0.0;
      }
      out.delta = pull_towards(s, target, kGain);
      break;
    }
    default:
      out.delta.assign(s.size(), 0.0);
  }
  return out;
}

OutputDistribution MazeTask::distribution(const CognitiveState& s, const Output& y) const {
  const std::vector<int> path = path_of(y);
  const int tip = path.empty() ? instance_.start : path.back();
  if (tip == instance_.goal) return {1.0};
  const std::vector<int>& nb = adjacency_[tip];
  if (nb.empty()) return {1.0};
  double peak = 0.0;
  for (int n : nb) peak = std::max(peak, s[n]);
  OutputDistribution p;
  double total = 0.0;
  for (int n : nb) {
    const double w = std::exp((s[n] - peak) / kSoftmaxTemperature);
    p.push_back(w);
    total += w;
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<Violation> MazeTask::axioms(const Output& y) const {
  std::vector<Violation> v;
  const std::vector<int> path = path_of(y);
  if (path.empty() || path.front() != instance_.start) v.push_back({"start"});
  if (path.empty() || path.back() != instance_.goal) v.push_back({"goal"});
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!adjacent(instance_, path[i - 1], path[i])) {
      v.push_back({"adjacency"});
      break;
    }
  }
  for (int c : path) {
    if (instance_.blocked[c]) {
      v.push_back({"obstacle"});
      break;
    }
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (y[path[i]] != static_cast<double>(i + 1)) {
      v.push_back({"contiguous"});
      break;
    }
  }
  return v;
}

bool MazeTask::is_correct(const Output& y) const {
  if (!axioms(y).empty()) return false;
  return static_cast<int>(path_of(y).size()) - 1 == shortest_;
}

ContextSignature MazeTask::context() const {
  ContextSignature sig;
  const int sr = instance_.start / instance_.cols, sc = instance_.start % instance_.cols;
  const int gr = instance_.goal / instance_.cols, gc = instance_.goal % instance_.cols;
  const int span = std::max(1, instance_.rows + instance_.cols - 2);
  sig.confidence = 1.0 - static_cast<double>(std::abs(sr - gr) + std::abs(sc - gc)) / span;
  int blocked = 0, seen = 0;
  for (int r = sr - 1; r <= sr + 1; ++r) {
    for (int c = sc - 1; c <= sc + 1; ++c) {
      if (r < 0 || r >= instance_.rows || c < 0 || c >= instance_.cols) continue;
      ++seen;
      if (instance_.blocked[instance_.cell(r, c)]) ++blocked;
    }
  }
  sig.alertness = seen > 0 ? static_cast<double>(blocked) / seen : 0.0;
  return sig;
}

}  // namespace hrr
