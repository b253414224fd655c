#include "hrr/tasks/sudoku.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hrr/errors.hpp"

namespace hrr {
namespace {

struct Layout {
  int box;
  int n;
  std::vector<std::vector<int>> units;
  std::vector<std::vector<int>> peers;
};

Layout make_layout(int box) {
  Layout l{box, box * box, {}, {}};
  const int n = l.n;
  for (int r = 0; r < n; ++r) {
    std::vector<int> u;
    for (int c = 0; c < n; ++c) u.push_back(r * n + c);
    l.units.push_back(u);
  }
  for (int c = 0; c < n; ++c) {
    std::vector<int> u;
    for (int r = 0; r < n; ++r) u.push_back(r * n + c);
    l.units.push_back(u);
  }
  for (int br = 0; br < box; ++br) {
    for (int bc = 0; bc < box; ++bc) {
      std::vector<int> u;
      for (int r = 0; r < box; ++r)
        for (int c = 0; c < box; ++c) u.push_back((br * box + r) * n + bc * box + c);
      l.units.push_back(u);
    }
  }
  l.peers.assign(static_cast<std::size_t>(n * n), {});
  for (const auto& u : l.units) {
    for (int a : u) {
      for (int b : u) {
        if (a != b) l.peers[a].push_back(b);
      }
    }
  }
  for (auto& p : l.peers) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  return l;
}

void check_instance(const SudokuInstance& inst) {
  if (inst.box < 2 || inst.box > 5) throw TaskError("sudoku: box size must be 2..5");
  const int n = inst.n();
  if (static_cast<int>(inst.cells.size()) != n * n) throw TaskError("sudoku: wrong cell count");
  for (int v : inst.cells) {
    if (v < 0 || v > n) throw TaskError("sudoku: digit out of range");
  }
}

struct Search {
  const Layout& layout;
  std::vector<int> grid;
  int limit;
  int found = 0;
  std::vector<int>* first;
  Rng* rng = nullptr;  // randomised digit order when set

  std::uint32_t candidates(int cell) const {
    const int n = layout.n;
    std::uint32_t used = 0;
    for (int p : layout.peers[cell]) {
      if (grid[p] != 0) used |= 1u << (grid[p] - 1);
    }
    return ~used & ((1u << n) - 1u);
  }

  void run() {
    int best = -1;
    int best_count = 99;
    std::uint32_t best_mask = 0;
    for (int c = 0; c < static_cast<int>(grid.size()); ++c) {
      if (grid[c] != 0) continue;
      const std::uint32_t m = candidates(c);
      const int k = std::popcount(m);
      if (k < best_count) {
        best = c;
        best_count = k;
        best_mask = m;
        if (k == 0) return;
      }
    }
    if (best < 0) {
      if (found == 0 && first) *first = grid;
      ++found;
      return;
    }
    std::vector<int> digits;
    for (int d = 0; d < layout.n; ++d) {
      if (best_mask & (1u << d)) digits.push_back(d + 1);
    }
    if (rng) {
      for (std::size_t i = digits.size(); i > 1; --i) {
        std::swap(digits[i - 1], digits[static_cast<std::size_t>(rng->integer(0, static_cast<std::int64_t>(i) - 1))]);
      }
    }
    for (int d : digits) {
      grid[best] = d;
      run();
      if (found >= limit) return;
    }
    grid[best] = 0;
  }
};

bool givens_consistent(const SudokuInstance& inst, const Layout& l) {
  for (const auto& u : l.units) {
    std::uint32_t seen = 0;
    for (int c : u) {
      const int v = inst.cells[c];
      if (v == 0) continue;
      if (seen & (1u << (v - 1))) return false;
      seen |= 1u << (v - 1);
    }
  }
  return true;
}

}  // namespace

int SudokuInstance::clue_count() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](int v) { return v != 0; }));
}

SudokuInstance parse_sudoku(const std::string& digits) {
  SudokuInstance inst;
  for (char ch : digits) {
    if (ch == '.' || ch == '0') {
      inst.cells.push_back(0);
    } else if (ch >= '1' && ch <= '9') {
      inst.cells.push_back(ch - '0');
    } else if (ch == '\n' || ch == '\r' || ch == ' ') {
      continue;
    } else {
      throw TaskError(std::string("sudoku: unexpected character '") + ch + "'");
    }
  }
  if (inst.cells.size() != 81) throw TaskError("sudoku: expected 81 cells");
  return inst;
}

std::string format_sudoku(const SudokuInstance& inst) {
  if (inst.box != 3) throw TaskError("sudoku: digit strings cover 9x9 grids only");
  std::string out;
  for (int v : inst.cells) out.push_back(static_cast<char>('0' + v));
  return out;
}

int count_solutions(const SudokuInstance& inst, int limit, std::vector<int>* first) {
  check_instance(inst);
  const Layout layout = make_layout(inst.box);
  if (!givens_consistent(inst, layout)) return 0;
  Search s{layout, inst.cells, limit, 0, first};
  s.run();
  return s.found;
}

SudokuInstance generate_sudoku(std::uint64_t seed, Difficulty difficulty, int box) {
  Rng rng(seed);
  SudokuInstance inst;
  inst.box = box;
  const int n = box * box;
  inst.cells.assign(static_cast<std::size_t>(n * n), 0);
  check_instance(inst);
  const Layout layout = make_layout(box);

  std::vector<int> full;
  {
    Search s{layout, inst.cells, 1, 0, &full};
    s.rng = &rng;
    s.run();
  }
  inst.cells = full;

  const double area = static_cast<double>(n * n) / 81.0;
  const int lo = difficulty == Difficulty::standard ? 28 : 22;
  const int hi = difficulty == Difficulty::standard ? 36 : 26;
  const int target = static_cast<int>(std::lround(static_cast<double>(rng.integer(lo, hi)) * area));

  std::vector<int> order(static_cast<std::size_t>(n * n));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i) - 1))]);
  }
  int clues = n * n;
  for (int cell : order) {
    if (clues <= target) break;
    const int keep = inst.cells[cell];
    inst.cells[cell] = 0;
    if (count_solutions(inst, 2) == 1) {
      --clues;
    } else {
      inst.cells[cell] = keep;
    }
  }
  return inst;
}

SudokuTask::SudokuTask(SudokuInstance instance) : instance_(std::move(instance)) {
  check_instance(instance_);
  n_ = instance_.n();
  Layout l = make_layout(instance_.box);
  units_ = std::move(l.units);
  peers_ = std::move(l.peers);
  for (int i = 0; i < n_; ++i) unit_names_.push_back("row " + std::to_string(i + 1));
  for (int i = 0; i < n_; ++i) unit_names_.push_back("column " + std::to_string(i + 1));
  for (int i = 0; i < n_; ++i) unit_names_.push_back("box " + std::to_string(i + 1));
  if (count_solutions(instance_, 1, &solution_) != 1) throw TaskError("sudoku: puzzle has no solution");
}

std::size_t SudokuTask::dimension() const { return static_cast<std::size_t>(n_ * n_ * n_); }

std::string SudokuTask::cell_name(int cell) const {
  return "cell " + std::to_string(cell / n_ + 1) + "," + std::to_string(cell % n_ + 1);
}

std::vector<double> SudokuTask::cell_distribution(const CognitiveState& s, int cell) const {
  std::vector<double> q(static_cast<std::size_t>(n_));
  double total = 0.0;
  for (int d = 0; d < n_; ++d) {
    q[d] = s[static_cast<std::size_t>(cell * n_ + d)];
    total += q[d];
  }
  if (total <= 0.0) {
    std::fill(q.begin(), q.end(), 1.0 / n_);
  } else {
    for (double& v : q) v /= total;
  }
  return q;
}

CognitiveState SudokuTask::encode() const {
  CognitiveState s(dimension(), 1.0 / n_);
  return project(s);
}

CognitiveState SudokuTask::project(const CognitiveState& s_in) const {
  if (s_in.size() != dimension()) throw TaskError("sudoku: state dimension mismatch");
  CognitiveState s = clip_unit(s_in);
  for (int c = 0; c < n_ * n_; ++c) {
    const int g = instance_.cells[c];
    if (g == 0) continue;
    for (int d = 0; d < n_; ++d) s[static_cast<std::size_t>(c * n_ + d)] = (d + 1 == g) ? 1.0 : 0.0;
  }
  return s;
}

Output SudokuTask::decode(const CognitiveState& s) const {
  Output y(static_cast<std::size_t>(n_ * n_));
  for (int c = 0; c < n_ * n_; ++c) {
    int best = 0;
    for (int d = 1; d < n_; ++d) {
      if (s[static_cast<std::size_t>(c * n_ + d)] > s[static_cast<std::size_t>(c * n_ + best)]) best = d;
    }
    y[c] = best + 1;
  }
  return y;
}

CognitiveState SudokuTask::mean_field_target(const CognitiveState& s) const {
  const int cells = n_ * n_;
  std::vector<std::vector<double>> q(static_cast<std::size_t>(cells));
  for (int c = 0; c < cells; ++c) q[c] = cell_distribution(s, c);
  CognitiveState target(s.size(), 0.0);
  for (int c = 0; c < cells; ++c) {
    std::vector<double> support(static_cast<std::size_t>(n_));
    double total = 0.0;
    for (int d = 0; d < n_; ++d) {
      double v = q[c][d];
      for (int p : peers_[c]) v *= 1.0 - q[p][d];
      support[d] = v;
      total += v;
    }
    for (int d = 0; d < n_; ++d) {
      target[static_cast<std::size_t>(c * n_ + d)] = total > 0.0 ? support[d] / total : q[c][d];
    }
  }
  return project(target);
}

SudokuTask::Domains SudokuTask::propagate(const CognitiveState& s) const {
  const int cells = n_ * n_;
  const std::uint32_t all = (1u << n_) - 1u;
  Domains dom;
  dom.alive.assign(static_cast<std::size_t>(cells), all);
  std::vector<int> value(static_cast<std::size_t>(cells), 0);
  for (int c = 0; c < cells; ++c) {
    if (instance_.cells[c] != 0) {
      value[c] = instance_.cells[c];
      continue;
    }
    const std::vector<double> q = cell_distribution(s, c);
    const auto it = std::max_element(q.begin(), q.end());
    if (*it >= kCommit) value[c] = static_cast<int>(it - q.begin()) + 1;
  }
  for (int c = 0; c < cells; ++c) {
    if (value[c] != 0) dom.alive[c] = 1u << (value[c] - 1);
  }

  std::vector<bool> broken(static_cast<std::size_t>(cells), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < cells; ++c) {
      if (broken[c] || std::popcount(dom.alive[c]) != 1) continue;
      for (int p : peers_[c]) {
        if (broken[p] || !(dom.alive[p] & dom.alive[c])) continue;
        if (std::popcount(dom.alive[p]) == 1) {
          // Two peers pinned to the same digit: the later one is reported.
          broken[p] = true;
          continue;
        }
        dom.alive[p] &= ~dom.alive[c];
        changed = true;
      }
    }
    for (const auto& u : units_) {
      for (int d = 0; d < n_; ++d) {
        const std::uint32_t bit = 1u << d;
        int where = -1;
        int count = 0;
        for (int c : u) {
          if (!broken[c] && (dom.alive[c] & bit)) {
            where = c;
            ++count;
          }
        }
        if (count == 1 && dom.alive[where] != bit) {
          dom.alive[where] = bit;
          changed = true;
        }
      }
    }
    for (int c = 0; c < cells; ++c) {
      if (!broken[c] && dom.alive[c] == 0) {
        broken[c] = true;
        changed = true;
      }
    }
  }
  for (int c = 0; c < cells; ++c) {
    if (!broken[c]) continue;
    dom.contradicted.push_back(c);
    std::uint32_t restored = 0;
    for (int d = 0; d < n_; ++d) {
      if (s[static_cast<std::size_t>(c * n_ + d)] > 0.0) restored |= 1u << d;
    }
    dom.alive[c] = restored ? restored : all;
  }
  return dom;
}

CognitiveState SudokuTask::propagation_target(const CognitiveState& s,
                                              std::vector<Violation>& violations) const {
  const Domains dom = propagate(s);
  CognitiveState target(s.size(), 0.0);
  for (int c = 0; c < n_ * n_; ++c) {
    const bool broken =
        std::find(dom.contradicted.begin(), dom.contradicted.end(), c) != dom.contradicted.end();
    const std::vector<double> q = cell_distribution(s, c);
    if (broken) {
      violations.push_back({cell_name(c)});
      for (int d = 0; d < n_; ++d) target[static_cast<std::size_t>(c * n_ + d)] = s[static_cast<std::size_t>(c * n_ + d)];
      continue;
    }
    double peak = 0.0;
    for (int d = 0; d < n_; ++d) {
      if (dom.alive[c] & (1u << d)) peak = std::max(peak, q[d]);
    }
    double total = 0.0;
    for (int d = 0; d < n_; ++d) {
      if (!(dom.alive[c] & (1u << d))) continue;
      const double w = std::exp((q[d] - peak) / kTemperature);
      target[static_cast<std::size_t>(c * n_ + d)] = w;
      total += w;
    }
    for (int d = 0; d < n_; ++d) target[static_cast<std::size_t>(c * n_ + d)] /= total;
  }
  return project(target);
}

CognitiveState SudokuTask::commitment_target(const CognitiveState& s) const {
  CognitiveState target = s;
  int best_cell = -1;
  int best_digit = 0;
  double best_p = -1.0;
  for (int c = 0; c < n_ * n_; ++c) {
    if (instance_.cells[c] != 0) continue;
    const std::vector<double> q = cell_distribution(s, c);
    const auto it = std::max_element(q.begin(), q.end());
    if (*it >= 1.0 - 1e-9) continue;
    if (*it > best_p) {
      best_p = *it;
      best_cell = c;
      best_digit = static_cast<int>(it - q.begin());
    }
  }
  if (best_cell >= 0) {
    for (int d = 0; d < n_; ++d)
      target[static_cast<std::size_t>(best_cell * n_ + d)] = d == best_digit ? 1.0 : 0.0;
  }
  return target;
}

AgentDelta SudokuTask::delta(AgentId agent, const CognitiveState& s, const Output&,
                             const HypothesisSet&) const {
  AgentDelta out;
  switch (agent) {
    case AgentId::R1A:
      out.delta = pull_towards(s, mean_field_target(s), kGain);
      break;
    case AgentId::R1C:
      out.delta = pull_towards(s, commitment_target(s), kGain);
      break;
    case AgentId::R1D:
      out.delta = pull_towards(s, propagation_target(s, out.violations), kGain);
      break;
    default:
      out.delta.assign(s.size(), 0.0);
  }
  return out;
}

OutputDistribution SudokuTask::distribution(const CognitiveState& s, const Output&) const {
  int chosen = 0;
  double worst = -1.0;
  for (int c = 0; c < n_ * n_; ++c) {
    const std::vector<double> q = cell_distribution(s, c);
    double h = 0.0;
    for (double v : q) {
      if (v > 0.0) h -= v * std::log(v);
    }
    if (h > worst + 1e-15) {
      worst = h;
      chosen = c;
    }
  }
  return cell_distribution(s, chosen);
}

std::vector<Violation> SudokuTask::axioms(const Output& y) const {
  std::vector<Violation> v;
  if (static_cast<int>(y.size()) != n_ * n_) throw TaskError("sudoku: output size mismatch");
  for (std::size_t u = 0; u < units_.size(); ++u) {
    std::uint32_t seen = 0;
    bool dup = false;
    for (int c : units_[u]) {
      const int d = static_cast<int>(y[c]);
      if (d < 1 || d > n_) {
        dup = true;
        continue;
      }
      if (seen & (1u << (d - 1))) dup = true;
      seen |= 1u << (d - 1);
    }
    if (dup) v.push_back({unit_names_[u]});
  }
  for (int c = 0; c < n_ * n_; ++c) {
    const int g = instance_.cells[c];
    if (g != 0 && static_cast<int>(y[c]) != g) v.push_back({"given " + cell_name(c).substr(5)});
  }
  return v;
}

std::size_t SudokuTask::axiom_count() const {
  return units_.size() + static_cast<std::size_t>(instance_.clue_count());
}

bool SudokuTask::is_correct(const Output& y) const {
  if (static_cast<int>(y.size()) != n_ * n_) return false;
  for (int c = 0; c < n_ * n_; ++c) {
    if (static_cast<int>(y[c]) != solution_[c]) return false;
  }
  return true;
}

ContextSignature SudokuTask::context() const {
  ContextSignature sig;
  const double cells = static_cast<double>(n_ * n_);
  const double clues = static_cast<double>(instance_.clue_count());
  sig.confidence = clues / cells;
  const Domains dom = propagate(encode());
  int settled = 0;
  for (int c = 0; c < n_ * n_; ++c) {
    if (instance_.cells[c] == 0 && std::popcount(dom.alive[c]) == 1) ++settled;
  }
  const double blanks = cells - clues;
  sig.alertness = blanks > 0.0 ? 1.0 - settled / blanks : 0.0;
  return sig;
}

}  // namespace hrr
