#pragma once

#include <cstdint>
#include <functional>

#include "subopt/oracles.hpp"
#include "subopt/types.hpp"

namespace subopt {

struct BruteForceResult {
  SolutionSet opt_set;
  double opt_value = 0.0;
  long long feasible_count = 0;
};

// Ground truth by full enumeration over subsets of `pool` (at most 22
// elements). Unmetered: verification traffic never touches run ledgers.
// Ties go to the subset that enumerates first (the empty set is first).
BruteForceResult brute_force_opt(const SubmodularOracle& oracle,
                                 const IndependenceSystem& system, const SolutionSet& pool);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long long trials = 0;
  std::uint64_t seed_base = 0;
};

// Mean and standard error of runner(seed) over seeds
// seed_base .. seed_base + trials - 1. Trials run in parallel and are merged
// by index, so the estimate is deterministic.
MonteCarloEstimate estimate_expected_value(const std::function<double(std::uint64_t)>& runner,
                                           long long trials, std::uint64_t seed_base);

// Estimates E[f(U)] for U drawn by keeping each element with probability 1/2
// (at most 20 elements). Callers compare the mean against a quarter of the
// unconstrained optimum.
MonteCarloEstimate quarter_sampling_check(const SubmodularOracle& oracle, long long trials,
                                          std::uint64_t seed_base);

}  // namespace subopt
