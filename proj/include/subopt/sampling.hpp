#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "subopt/oracles.hpp"
#include "subopt/rng.hpp"
#include "subopt/types.hpp"

namespace subopt {

// Parameters of the repeated-sampling run. lambda is derived as
// epsilon * (p + 1) / m once the system parameter p is known.
struct SamplingParams {
  double epsilon = 0.1;
  int m = 1;
  double phi1 = 1.0;
  double phi2 = 1.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

double derive_lambda(double epsilon, int p, int m);

// m = 1 + ceil(sqrt((p + 1) / 2)), phi1 = 1, phi2 = 1/2.
SamplingParams preset_p_system(int p, double epsilon, std::uint64_t seed = 0);
// m = 1, phi1 = 1 / (p + 1), phi2 = 1.
SamplingParams preset_p_extendible(int p, double epsilon, std::uint64_t seed = 0);

// One trace record per threshold level and per inner sampling step.
struct TraceEvent {
  enum class Kind { Level, Inner };
  Kind kind;
  int iteration;  // repeated-sampling iteration, 0-based
  int level;      // threshold level index within the iteration
  int inner;      // step index within the level; -1 for level records
  double delta;
  int x_size;  // candidate-set size (after the step, for inner records)
  int eta;     // sentinel t+1 means the whole sequence was accepted
  int a_size;
  int s_size_before;
  std::vector<ElementId> admitted;
  RunLedger ledger;
};
using TraceSink = std::vector<TraceEvent>;

struct RunResult {
  SolutionSet solution;
  double value = 0.0;
  RunLedger ledger;
  // (f(Omega_j), f(Lambda_j)) per iteration.
  std::vector<std::pair<double, double>> per_iteration;
};

// Random maximal feasible extension of `solution` inside `pool`: repeatedly
// shuffles the surviving candidates, accepts the longest feasible prefix and
// drops everything that can no longer be added. Returns the accepted elements
// in acceptance order. Charges independence rounds only.
std::vector<ElementId> rand_sequence(const SolutionSet& pool, const SolutionSet& solution,
                                     const IndependenceSystem& system, Rng& rng,
                                     RunLedger& ledger);

// Largest j such that solution + sequence[0..j) is feasible. Prefix
// feasibility is monotone under downward closure, so a binary search with
// single-query probes suffices.
int prefix_feasible_max(std::span<const ElementId> sequence, const SolutionSet& solution,
                        const IndependenceSystem& system, RunLedger& ledger);

// Independent inclusion with probability phi. No oracle queries.
SolutionSet unif_sampling(const SolutionSet& input, double phi, Rng& rng);

// { e in pool : f(e | s) >= delta and s + e feasible }, one marginal round
// plus one feasibility round over the threshold survivors.
SolutionSet threshold_candidates(const SubmodularOracle& oracle, const IndependenceSystem& system,
                                 const SolutionSet& s, double delta, const SolutionSet& pool,
                                 RunLedger& ledger, BatchObserver* observer = nullptr);

// Minimal j in [1, t] with |X_j| < (1 - epsilon)|X|, where
// X_j = { e in X : f(e | s + sequence[0..j-1)) >= delta and that set + e is
// feasible }. |X_j| is non-increasing in j; a violation among probed indices
// throws. Returns t+1 when no j qualifies; x_eta receives X_eta (empty for
// the sentinel: the sequence is maximal in X, so nothing survives it).
int binary_search_eta(const SubmodularOracle& oracle, const IndependenceSystem& system,
                      const SolutionSet& s, std::span<const ElementId> sequence,
                      const SolutionSet& x, double delta, double epsilon, RunLedger& ledger,
                      SolutionSet* x_eta, BatchObserver* observer = nullptr);

// Binary-search core over a monotone predicate on [1, t]: minimal j with
// pred(j) true, t+1 if none. Separated out so it can be checked against a
// linear scan on synthetic profiles.
template <class Pred>
int eta_search(int t, Pred&& pred) {
  int lo = 1, hi = t + 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// Descending-threshold sampling over `pool`. Seeds the threshold with the
// best feasible singleton, then repeatedly extends the solution with sampled
// prefixes of random feasible sequences while the threshold decays by
// (1 - epsilon) down to lambda times its initial value.
SolutionSet rand_sampling(const SubmodularOracle& oracle, const SolutionSet& pool,
                          const IndependenceSystem& system, double lambda, double epsilon,
                          double phi1, const Rng& rng, RunLedger& ledger,
                          TraceSink* trace = nullptr, int trace_iteration = 0,
                          BatchObserver* observer = nullptr);

// Full algorithm: m rounds of rand_sampling over a shrinking pool, a
// phi2-subsample of each round's output, and the best of all 2m candidates.
RunResult rep_sampling(const SubmodularOracle& oracle, const IndependenceSystem& system,
                       const SamplingParams& params, RunLedger& ledger,
                       std::optional<int> p_override = std::nullopt, TraceSink* trace = nullptr,
                       BatchObserver* observer = nullptr);

}  // namespace subopt
