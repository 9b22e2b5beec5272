#pragma once

#include <cassert>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "subopt/types.hpp"

namespace subopt {

// Thrown by a batch call once a query budget is exhausted (see BatchObserver).
struct BudgetExhausted {};

// Hook on the value-oracle batch layer. Observation happens serially after
// each batch completes, so observers need no locking and abort points fall
// on round boundaries.
class BatchObserver {
 public:
  virtual ~BatchObserver() = default;
  // Called once per evaluated set, in batch order.
  virtual void on_value(const SolutionSet& s, double value) = 0;
  // Return true after the batch whose queries crossed the budget; the batch
  // layer then raises BudgetExhausted.
  virtual bool budget_exceeded(const RunLedger& ledger) const = 0;
};

// Non-negative submodular valuation oracle over a fixed ground set.
// Implementations are immutable after construction; evaluate() must be safe
// to call concurrently. f(empty) is computed once and cached.
class SubmodularOracle {
 public:
  explicit SubmodularOracle(GroundSet ground) : ground_(ground) {}
  virtual ~SubmodularOracle() = default;

  GroundSet ground() const { return ground_; }
  ElementId n() const { return ground_.n; }

  // Raw evaluation, no ledger. Used by the batch layer and by verification
  // paths (brute force, tests) that must not pollute complexity counters.
  double value_unmetered(const SolutionSet& s) const {
    check_domain(s);
    if (s.empty()) return empty_value();
    const double v = evaluate(s);
    assert(v >= -1e-9 && "submodular oracle returned a negative value");
    return v;
  }

  double empty_value() const {
    std::call_once(empty_once_, [this] { empty_value_ = evaluate(SolutionSet(ground_)); });
    assert(empty_value_ >= -1e-9 && "f(empty) must be non-negative");
    return empty_value_;
  }

  // Marginals f(e | base) for each candidate, given base_value = f(base).
  // The default takes the value difference per candidate; objectives override
  // this with a cheaper equivalent. Must be parallel-safe and must stay within
  // 1e-9 of the default path.
  virtual void marginals(const SolutionSet& base, double base_value,
                         std::span<const ElementId> candidates, std::span<double> out) const;

 protected:
  virtual double evaluate(const SolutionSet& s) const = 0;

 private:
  void check_domain(const SolutionSet& s) const {
    if (s.universe_size() != ground_.n)
      throw std::invalid_argument("solution set does not match oracle ground set");
  }

  GroundSet ground_;
  mutable std::once_flag empty_once_;
  mutable double empty_value_ = 0.0;
};

// Downward-closed feasibility oracle (p-system). Implementations declare
// their parameter p and an upper bound on the rank; both immutable.
class IndependenceSystem {
 public:
  explicit IndependenceSystem(GroundSet ground) : ground_(ground) {}
  virtual ~IndependenceSystem() = default;

  GroundSet ground() const { return ground_; }
  ElementId n() const { return ground_.n; }

  // Exact membership verdict; pure, safe to call concurrently.
  virtual bool feasible(const SolutionSet& s) const = 0;
  virtual int p() const = 0;
  virtual int rank_bound() const = 0;

 private:
  GroundSet ground_;
};

// --- Instrumented batch layer -----------------------------------------------
//
// One call = one adaptive round. Inputs to every query in a batch are fixed
// before any output is produced, which is what makes the queries mutually
// independent. Evaluation inside a batch runs through the parallel kernels;
// counters are settled serially afterwards.

std::vector<double> value_batch(const SubmodularOracle& oracle,
                                std::span<const SolutionSet> sets, RunLedger& ledger,
                                BatchObserver* observer = nullptr);

// Marginals f(e | base) for all candidates: one adaptive round. Charges
// |candidates| queries plus one for f(base) (skipped when base is empty and
// the run already paid for f(empty)).
std::vector<double> marginal_batch(const SubmodularOracle& oracle, const SolutionSet& base,
                                   std::span<const ElementId> candidates, RunLedger& ledger,
                                   BatchObserver* observer = nullptr);

std::vector<char> feasible_batch(const IndependenceSystem& system,
                                 std::span<const SolutionSet> sets, RunLedger& ledger);

// Feasibility of base + {e} for each candidate: one adaptive round.
std::vector<char> feasible_with_batch(const IndependenceSystem& system, const SolutionSet& base,
                                      std::span<const ElementId> candidates, RunLedger& ledger);

// Serial reference twins of the kernels behind the batch layer; outputs are
// bit-identical to the parallel path. Kept for tests and the kernel benchmark.
namespace kernels {
void eval_sets(const SubmodularOracle& oracle, std::span<const SolutionSet> sets,
               std::span<double> out);
void eval_sets_serial(const SubmodularOracle& oracle, std::span<const SolutionSet> sets,
                      std::span<double> out);
void eval_feasible(const IndependenceSystem& system, std::span<const SolutionSet> sets,
                   std::span<char> out);
void eval_feasible_serial(const IndependenceSystem& system, std::span<const SolutionSet> sets,
                          std::span<char> out);
}  // namespace kernels

}  // namespace subopt
