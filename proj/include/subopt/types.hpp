#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace subopt {

using ElementId = std::int32_t;

// Ground set {0, 1, ..., n-1}.
struct GroundSet {
  ElementId n = 0;

  bool contains(ElementId e) const { return e >= 0 && e < n; }
  bool operator==(const GroundSet&) const = default;
};

// A subset of a ground set. Keeps both the insertion order of its members
// and a bitmask for O(1) membership tests. Two sets compare equal when they
// hold the same elements, regardless of insertion order.
class SolutionSet {
 public:
  SolutionSet() = default;
  explicit SolutionSet(GroundSet ground)
      : universe_(ground.n), mask_((static_cast<std::size_t>(ground.n) + 63) / 64, 0) {}
  SolutionSet(GroundSet ground, std::initializer_list<ElementId> elems) : SolutionSet(ground) {
    for (ElementId e : elems) add(e);
  }

  static SolutionSet full(GroundSet ground) {
    SolutionSet s(ground);
    for (ElementId e = 0; e < ground.n; ++e) s.add(e);
    return s;
  }

  ElementId universe_size() const { return universe_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }

  bool contains(ElementId e) const {
    if (e < 0 || e >= universe_) return false;
    return (mask_[static_cast<std::size_t>(e) >> 6] >> (e & 63)) & 1u;
  }

  void add(ElementId e) {
    if (e < 0 || e >= universe_)
      throw std::out_of_range("SolutionSet::add: element outside ground set");
    if (contains(e)) throw std::invalid_argument("SolutionSet::add: duplicate element");
    mask_[static_cast<std::size_t>(e) >> 6] |= (std::uint64_t{1} << (e & 63));
    members_.push_back(e);
  }

  // Members in insertion order.
  std::span<const ElementId> members() const { return members_; }

  // Members in ascending id order; evaluation code iterates this so that
  // values never depend on insertion history.
  std::vector<ElementId> sorted_members() const {
    std::vector<ElementId> out;
    out.reserve(members_.size());
    for (ElementId e = 0; e < universe_; ++e)
      if (contains(e)) out.push_back(e);
    return out;
  }

  SolutionSet with(ElementId e) const {
    SolutionSet s = *this;
    if (!s.contains(e)) s.add(e);
    return s;
  }

  bool operator==(const SolutionSet& other) const {
    return universe_ == other.universe_ && mask_ == other.mask_;
  }

 private:
  ElementId universe_ = 0;
  std::vector<ElementId> members_;
  std::vector<std::uint64_t> mask_;
};

// Elements of `a` that are not in `b`, keeping a's order.
inline SolutionSet difference(const SolutionSet& a, const SolutionSet& b) {
  SolutionSet out(GroundSet{a.universe_size()});
  for (ElementId e : a.members())
    if (!b.contains(e)) out.add(e);
  return out;
}

// Query and round counters for one algorithm run. Value-oracle and
// independence-oracle traffic is tracked separately.
struct RunLedger {
  long long value_queries = 0;
  long long value_rounds = 0;
  long long indep_queries = 0;
  long long indep_rounds = 0;

  // The first f(empty) evaluation of a run is charged as one query; repeats
  // within the same run hit the oracle-side cache and are free.
  bool empty_value_charged = false;

  bool operator==(const RunLedger& o) const {
    return value_queries == o.value_queries && value_rounds == o.value_rounds &&
           indep_queries == o.indep_queries && indep_rounds == o.indep_rounds;
  }
};

}  // namespace subopt
