#include "subopt/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "subopt/sampling.hpp"

namespace subopt {

double default_sample_probability(int p) {
  if (p < 1) throw std::invalid_argument("p must be at least 1");
  return 1.0 / (static_cast<double>(p) + 1.0);
}

int default_repeated_greedy_iterations(int p) {
  if (p < 1) throw std::invalid_argument("p must be at least 1");
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p)))) + 1;
}

SolutionSet greedy(const SubmodularOracle& oracle, const IndependenceSystem& system,
                   const SolutionSet& pool, RunLedger& ledger, double* value_out,
                   BatchObserver* observer) {
  SolutionSet s(oracle.ground());
  double value = oracle.empty_value();
  while (true) {
    std::vector<ElementId> candidates;
    for (ElementId e = 0; e < pool.universe_size(); ++e)
      if (pool.contains(e) && !s.contains(e)) candidates.push_back(e);
    if (candidates.empty()) break;

    const auto gains = marginal_batch(oracle, s, candidates, ledger, observer);
    std::vector<ElementId> positive;
    positive.reserve(candidates.size());
    std::vector<double> positive_gain;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (gains[i] > 0.0) {
        positive.push_back(candidates[i]);
        positive_gain.push_back(gains[i]);
      }
    }
    if (positive.empty()) break;

    const auto feasible = feasible_with_batch(system, s, positive, ledger);
    int best = -1;
    for (std::size_t i = 0; i < positive.size(); ++i)
      if (feasible[i] && (best < 0 || positive_gain[i] > positive_gain[static_cast<std::size_t>(
                                          best)]))
        best = static_cast<int>(i);
    if (best < 0) break;

    s.add(positive[static_cast<std::size_t>(best)]);
    value += positive_gain[static_cast<std::size_t>(best)];
  }
  if (value_out) *value_out = value;
  return s;
}

SolutionSet repeated_greedy(const SubmodularOracle& oracle, const IndependenceSystem& system,
                            int iterations, RunLedger& ledger, BatchObserver* observer,
                            std::vector<SolutionSet>* rounds_out) {
  if (iterations < 1) throw std::invalid_argument("repeated_greedy needs at least one iteration");
  SolutionSet pool = SolutionSet::full(oracle.ground());
  SolutionSet best(oracle.ground());
  double best_value = oracle.empty_value();
  for (int i = 0; i < iterations; ++i) {
    double value = 0.0;
    SolutionSet s = greedy(oracle, system, pool, ledger, &value, observer);
    if (value > best_value) {
      best_value = value;
      best = s;
    }
    pool = difference(pool, s);
    if (rounds_out) rounds_out->push_back(std::move(s));
    if (pool.empty()) break;
  }
  return best;
}

SolutionSet sample_greedy(const SubmodularOracle& oracle, const IndependenceSystem& system,
                          double sample_probability, Rng& rng, RunLedger& ledger,
                          BatchObserver* observer) {
  if (!(sample_probability >= 0.0 && sample_probability <= 1.0))
    throw std::invalid_argument("sample probability must lie in [0, 1]");
  const SolutionSet sample = unif_sampling(SolutionSet::full(oracle.ground()),
                                           sample_probability, rng);
  if (sample.empty()) return SolutionSet(oracle.ground());
  return greedy(oracle, system, sample, ledger, nullptr, observer);
}

}  // namespace subopt
