#include "subopt/constraints.hpp"

#include <algorithm>
#include <stdexcept>

namespace subopt {

UniformMatroid::UniformMatroid(GroundSet ground, int k) : IndependenceSystem(ground), k_(k) {
  if (k < 0) throw std::invalid_argument("uniform matroid cap must be non-negative");
}

bool UniformMatroid::feasible(const SolutionSet& s) const { return s.size() <= k_; }

int UniformMatroid::rank_bound() const { return std::min<int>(k_, n()); }

PartitionMatroid::PartitionMatroid(GroundSet ground, std::vector<std::vector<ElementId>> blocks,
                                   std::vector<int> caps)
    : IndependenceSystem(ground),
      blocks_(std::move(blocks)),
      caps_(std::move(caps)),
      block_of_(ground.n, -1) {
  if (blocks_.size() != caps_.size())
    throw std::invalid_argument("partition matroid needs one cap per block");
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (caps_[b] < 0) throw std::invalid_argument("partition matroid caps must be non-negative");
    for (ElementId e : blocks_[b]) {
      if (!ground.contains(e))
        throw std::invalid_argument("partition matroid block element outside ground set");
      if (block_of_[static_cast<std::size_t>(e)] != -1)
        throw std::invalid_argument("partition matroid blocks must be disjoint");
      block_of_[static_cast<std::size_t>(e)] = static_cast<int>(b);
    }
  }
}

bool PartitionMatroid::feasible(const SolutionSet& s) const {
  std::vector<int> counts(blocks_.size(), 0);
  for (ElementId e : s.members()) {
    const int b = block_of_[static_cast<std::size_t>(e)];
    if (b >= 0 && ++counts[static_cast<std::size_t>(b)] > caps_[static_cast<std::size_t>(b)])
      return false;
  }
  return true;
}

int PartitionMatroid::rank_bound() const {
  int covered = 0;
  int rank = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    covered += static_cast<int>(blocks_[b].size());
    rank += std::min<int>(caps_[b], static_cast<int>(blocks_[b].size()));
  }
  return rank + (n() - covered);
}

MatroidIntersection::MatroidIntersection(
    std::vector<std::shared_ptr<const IndependenceSystem>> members)
    : IndependenceSystem(members.empty() ? GroundSet{0} : members.front()->ground()),
      members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("matroid intersection needs members");
  p_ = 0;
  for (const auto& member : members_) {
    if (!member) throw std::invalid_argument("matroid intersection member is null");
    if (!(member->ground() == ground()))
      throw std::invalid_argument("matroid intersection members disagree on the ground set");
    p_ += member->p();
  }
}

bool MatroidIntersection::feasible(const SolutionSet& s) const {
  for (const auto& member : members_)
    if (!member->feasible(s)) return false;
  return true;
}

int MatroidIntersection::rank_bound() const {
  int bound = n();
  for (const auto& member : members_) bound = std::min(bound, member->rank_bound());
  return bound;
}

int estimate_p(const std::vector<std::vector<ElementId>>& groups, const std::vector<int>& caps) {
  int binding = 0;
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (static_cast<int>(groups[i].size()) > caps[i]) ++binding;
  return std::max(1, binding);
}

GroupCapSystem::GroupCapSystem(GroundSet ground, std::vector<std::vector<ElementId>> groups,
                               std::vector<int> caps)
    : IndependenceSystem(ground), groups_(std::move(groups)), caps_(std::move(caps)) {
  if (groups_.size() != caps_.size())
    throw std::invalid_argument("group-cap system needs one cap per group");
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (caps_[i] < 0) throw std::invalid_argument("group caps must be non-negative");
    auto& group = groups_[i];
    std::sort(group.begin(), group.end());
    group.erase(std::unique(group.begin(), group.end()), group.end());
    for (ElementId e : group)
      if (!ground.contains(e)) throw std::invalid_argument("group element outside ground set");
  }
  p_ = estimate_p(groups_, caps_);

  if (n() <= 20) {
    // Exact rank by enumeration.
    int best = 0;
    const std::uint64_t limit = std::uint64_t{1} << n();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      SolutionSet s((GroundSet{n()}));
      for (ElementId e = 0; e < n(); ++e)
        if ((mask >> e) & 1u) s.add(e);
      if (s.size() > best && feasible(s)) best = s.size();
    }
    rank_bound_ = best;
  } else {
    // Greedy fill gives one maximal set; the p-system base ratio turns its
    // size into an upper bound on the rank.
    SolutionSet s((GroundSet{n()}));
    for (ElementId e = 0; e < n(); ++e) {
      SolutionSet extended = s.with(e);
      if (feasible(extended)) s = std::move(extended);
    }
    rank_bound_ = std::min<int>(n(), p_ * s.size());
  }
}

bool GroupCapSystem::feasible(const SolutionSet& s) const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    int hits = 0;
    for (ElementId e : groups_[i])
      if (s.contains(e) && ++hits > caps_[i]) return false;
  }
  return true;
}

}  // namespace subopt
