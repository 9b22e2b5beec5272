#pragma once

#include <memory>
#include <vector>

#include "subopt/oracles.hpp"
#include "subopt/types.hpp"

namespace subopt {

// |S| <= k.
class UniformMatroid : public IndependenceSystem {
 public:
  UniformMatroid(GroundSet ground, int k);

  bool feasible(const SolutionSet& s) const override;
  int p() const override { return 1; }
  int rank_bound() const override;
  int k() const { return k_; }

 private:
  int k_;
};

// At most caps[j] elements from block j. Blocks are disjoint; elements not
// covered by any block are unconstrained.
class PartitionMatroid : public IndependenceSystem {
 public:
  PartitionMatroid(GroundSet ground, std::vector<std::vector<ElementId>> blocks,
                   std::vector<int> caps);

  bool feasible(const SolutionSet& s) const override;
  int p() const override { return 1; }
  int rank_bound() const override;

  const std::vector<std::vector<ElementId>>& blocks() const { return blocks_; }
  const std::vector<int>& caps() const { return caps_; }

 private:
  std::vector<std::vector<ElementId>> blocks_;
  std::vector<int> caps_;
  std::vector<int> block_of_;  // -1 for uncovered elements
};

// Feasible iff feasible in every member; the intersection of k matroids is a
// k-extendible system, so p sums the member parameters.
class MatroidIntersection : public IndependenceSystem {
 public:
  explicit MatroidIntersection(std::vector<std::shared_ptr<const IndependenceSystem>> members);

  bool feasible(const SolutionSet& s) const override;
  int p() const override { return p_; }
  int rank_bound() const override;

  const std::vector<std::shared_ptr<const IndependenceSystem>>& members() const {
    return members_;
  }

 private:
  std::vector<std::shared_ptr<const IndependenceSystem>> members_;
  int p_;
};

// Possibly-overlapping groups V_i with caps k_i: S feasible iff
// |S intersect V_i| <= k_i for every i.
class GroupCapSystem : public IndependenceSystem {
 public:
  GroupCapSystem(GroundSet ground, std::vector<std::vector<ElementId>> groups,
                 std::vector<int> caps);

  bool feasible(const SolutionSet& s) const override;
  int p() const override { return p_; }
  int rank_bound() const override { return rank_bound_; }

  const std::vector<std::vector<ElementId>>& groups() const { return groups_; }
  const std::vector<int>& caps() const { return caps_; }

 private:
  std::vector<std::vector<ElementId>> groups_;
  std::vector<int> caps_;
  int p_;
  int rank_bound_;
};

// Number of groups whose size exceeds their cap, floored at 1; only groups
// that can actually bind contribute to the system parameter.
int estimate_p(const std::vector<std::vector<ElementId>>& groups, const std::vector<int>& caps);

}  // namespace subopt
