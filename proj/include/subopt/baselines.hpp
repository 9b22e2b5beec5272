#pragma once

#include "subopt/oracles.hpp"
#include "subopt/rng.hpp"
#include "subopt/types.hpp"

namespace subopt {

struct GreedyConfig {
  double sample_probability = 1.0;  // sample_greedy
  int iterations = 1;               // repeated_greedy
};

// 1 / (p + 1), mirroring the extendible-preset sampling rate.
double default_sample_probability(int p);
// ceil(sqrt(p)) + 1.
int default_repeated_greedy_iterations(int p);

// Classical greedy: per step, one marginal round over the remaining pool and
// one feasibility round, accepting the feasible element of largest positive
// marginal (ties to the lowest id). Theta(r) adaptive rounds; the foil for
// the sampling algorithms. If value_out is given it receives f(empty) plus
// the accepted marginals.
SolutionSet greedy(const SubmodularOracle& oracle, const IndependenceSystem& system,
                   const SolutionSet& pool, RunLedger& ledger, double* value_out = nullptr,
                   BatchObserver* observer = nullptr);

// Runs greedy `iterations` times over a shrinking pool and keeps the best
// recorded solution by value. Per-iteration solutions (pairwise disjoint by
// pool subtraction) are exposed through rounds_out when requested.
SolutionSet repeated_greedy(const SubmodularOracle& oracle, const IndependenceSystem& system,
                            int iterations, RunLedger& ledger, BatchObserver* observer = nullptr,
                            std::vector<SolutionSet>* rounds_out = nullptr);

// Subsamples the ground set element-wise, then runs greedy on the sample.
SolutionSet sample_greedy(const SubmodularOracle& oracle, const IndependenceSystem& system,
                          double sample_probability, Rng& rng, RunLedger& ledger,
                          BatchObserver* observer = nullptr);

}  // namespace subopt
