#include "hrr/task.hpp"

#include <algorithm>
#include <stdexcept>


namespace hrr {

HypothesisSet::HypothesisSet(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("HypothesisSet: capacity must be >= 1");
}

void HypothesisSet::add(Hypothesis h) {
  entries_.push_back(std::move(h));
  if (entries_.size() <= capacity_) return;
  auto worst = std::min_element(entries_.begin(), entries_.end(),
                                [](const Hypothesis& a, const Hypothesis& b) { return a.score < b.score; });
  entries_.erase(worst);
}

void HypothesisSet::prune_below(double floor) {
  std::erase_if(entries_, [floor](const Hypothesis& h) { return h.score < floor; });
}

void HypothesisSet::keep_only(const std::vector<bool>& keep) {
  if (keep.size() != entries_.size()) throw std::invalid_argument("keep_only: mask size mismatch");
  std::vector<Hypothesis> kept;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (keep[i]) kept.push_back(std::move(entries_[i]));
  }
  entries_ = std::move(kept);
}

const Hypothesis* HypothesisSet::best() const {
  if (entries_.empty()) return nullptr;
  return &*std::max_element(entries_.begin(), entries_.end(),
                            [](const Hypothesis& a, const Hypothesis& b) { return a.score < b.score; });
}

CognitiveState Task::project(const CognitiveState& s) const { return clip_unit(s); }

std::vector<Hypothesis> Task::propose(const CognitiveState&, int, Rng&) const { return {}; }

bool Task::consistent(const CognitiveState&) const { return true; }

CognitiveState clip_unit(CognitiveState s) {
  for (double& x : s) x = std::clamp(x, 0.0, 1.0);
  return s;
}

CognitiveState pull_towards(const CognitiveState& s, const CognitiveState& target, double gain) {
  if (s.size() != target.size()) throw std::invalid_argument("pull_towards: dimension mismatch");
  CognitiveState d(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = std::clamp(gain * (target[i] - s[i]), -1.0, 1.0);
  return d;
}

}  // namespace hrr
