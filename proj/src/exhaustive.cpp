#include "subopt/exhaustive.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "subopt/parallel.hpp"
#include "subopt/rng.hpp"

namespace subopt {
namespace {

SolutionSet set_from_mask(GroundSet ground, std::span<const ElementId> ids, std::uint64_t mask) {
  SolutionSet s(ground);
  for (std::size_t i = 0; i < ids.size(); ++i)
    if ((mask >> i) & 1u) s.add(ids[i]);
  return s;
}

}  // namespace

BruteForceResult brute_force_opt(const SubmodularOracle& oracle, const IndependenceSystem& system,
                                 const SolutionSet& pool) {
  if (pool.size() > 22)
    throw std::invalid_argument("brute_force_opt refuses pools larger than 22 elements");
  if (pool.universe_size() != oracle.n() || oracle.n() != system.n())
    throw std::invalid_argument("pool, oracle, and system must share a ground set");

  const std::vector<ElementId> ids = pool.sorted_members();
  const std::uint64_t subsets = std::uint64_t{1} << ids.size();

  struct Chunk {
    double value = 0.0;
    std::uint64_t mask = 0;
    bool any = false;
    long long feasible = 0;
  };
  const std::int64_t chunk_count = 64;
  const std::uint64_t chunk_size = (subsets + chunk_count - 1) / chunk_count;
  std::vector<Chunk> chunks(static_cast<std::size_t>(chunk_count));

  parallel_for(chunk_count, [&](std::int64_t c) {
    Chunk& chunk = chunks[static_cast<std::size_t>(c)];
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk_size;
    const std::uint64_t end = std::min(subsets, begin + chunk_size);
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      const SolutionSet s = set_from_mask(oracle.ground(), ids, mask);
      if (!system.feasible(s)) continue;
      ++chunk.feasible;
      const double value = oracle.value_unmetered(s);
      if (!chunk.any || value > chunk.value) {
        chunk.value = value;
        chunk.mask = mask;
        chunk.any = true;
      }
    }
  });

  BruteForceResult result{SolutionSet(oracle.ground()), 0.0, 0};
  bool any = false;
  std::uint64_t best_mask = 0;
  for (const Chunk& chunk : chunks) {
    result.feasible_count += chunk.feasible;
    if (!chunk.any) continue;
    if (!any || chunk.value > result.opt_value ||
        (chunk.value == result.opt_value && chunk.mask < best_mask)) {
      result.opt_value = chunk.value;
      best_mask = chunk.mask;
      any = true;
    }
  }
  if (any) result.opt_set = set_from_mask(oracle.ground(), ids, best_mask);
  return result;
}

MonteCarloEstimate estimate_expected_value(const std::function<double(std::uint64_t)>& runner,
                                           long long trials, std::uint64_t seed_base) {
  if (trials < 30)
    throw std::invalid_argument("estimate_expected_value needs at least 30 trials");
  std::vector<double> samples(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](std::int64_t t) {
    samples[static_cast<std::size_t>(t)] = runner(seed_base + static_cast<std::uint64_t>(t));
  });

  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / static_cast<double>(trials);
  double sq = 0.0;
  for (double v : samples) sq += (v - mean) * (v - mean);
  const double sample_var = trials > 1 ? sq / static_cast<double>(trials - 1) : 0.0;
  return {mean, std::sqrt(sample_var / static_cast<double>(trials)), trials, seed_base};
}

MonteCarloEstimate quarter_sampling_check(const SubmodularOracle& oracle, long long trials,
                                          std::uint64_t seed_base) {
  if (oracle.n() > 20)
    throw std::invalid_argument("quarter_sampling_check is limited to 20 elements");
  if (trials < 1) throw std::invalid_argument("at least one trial required");

  std::vector<double> samples(static_cast<std::size_t>(trials));
  parallel_for(trials, [&](std::int64_t t) {
    Rng rng(seed_base + static_cast<std::uint64_t>(t));
    SolutionSet u(oracle.ground());
    for (ElementId e = 0; e < oracle.n(); ++e)
      if (rng.next_bernoulli(0.5)) u.add(e);
    samples[static_cast<std::size_t>(t)] = oracle.value_unmetered(u);
  });

  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / static_cast<double>(trials);
  double sq = 0.0;
  for (double v : samples) sq += (v - mean) * (v - mean);
  const double sample_var = trials > 1 ? sq / static_cast<double>(trials - 1) : 0.0;
  return {mean, std::sqrt(sample_var / static_cast<double>(trials)), trials, seed_base};
}

}  // namespace subopt
