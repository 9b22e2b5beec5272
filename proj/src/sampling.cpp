#include "subopt/sampling.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

namespace subopt {

void SamplingParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(phi1 >= 0.0 && phi1 <= 1.0)) throw std::invalid_argument("phi1 must lie in [0, 1]");
  if (!(phi2 >= 0.0 && phi2 <= 1.0)) throw std::invalid_argument("phi2 must lie in [0, 1]");
}

double derive_lambda(double epsilon, int p, int m) {
  return epsilon * static_cast<double>(p + 1) / static_cast<double>(m);
}

SamplingParams preset_p_system(int p, double epsilon, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("p must be at least 1");
  SamplingParams params;
  params.epsilon = epsilon;
  params.m = 1 + static_cast<int>(std::ceil(std::sqrt((static_cast<double>(p) + 1.0) / 2.0)));
  params.phi1 = 1.0;
  params.phi2 = 0.5;
  params.seed = seed;
  params.lambda = derive_lambda(epsilon, p, params.m);
  params.validate();
  return params;
}

SamplingParams preset_p_extendible(int p, double epsilon, std::uint64_t seed) {
  if (p < 1) throw std::invalid_argument("p must be at least 1");
  SamplingParams params;
  params.epsilon = epsilon;
  params.m = 1;
  params.phi1 = 1.0 / (static_cast<double>(p) + 1.0);
  params.phi2 = 1.0;
  params.seed = seed;
  params.lambda = derive_lambda(epsilon, p, params.m);
  params.validate();
  return params;
}

int prefix_feasible_max(std::span<const ElementId> sequence, const SolutionSet& solution,
                        const IndependenceSystem& system, RunLedger& ledger) {
  const int t = static_cast<int>(sequence.size());
  int lo = 0, hi = t;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    SolutionSet probe = solution;
    for (int i = 0; i < mid; ++i) probe.add(sequence[static_cast<std::size_t>(i)]);
    const SolutionSet probes[] = {std::move(probe)};
    if (feasible_batch(system, probes, ledger)[0])
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

std::vector<ElementId> rand_sequence(const SolutionSet& pool, const SolutionSet& solution,
                                     const IndependenceSystem& system, Rng& rng,
                                     RunLedger& ledger) {
  std::vector<ElementId> accepted;
  SolutionSet current = solution;
  std::vector<ElementId> remaining(pool.members().begin(), pool.members().end());
  for (ElementId e : remaining)
    if (solution.contains(e))
      throw std::invalid_argument("rand_sequence pool must be disjoint from the solution");

  while (!remaining.empty()) {
    rng.shuffle(remaining);
    const int eta = prefix_feasible_max(remaining, current, system, ledger);
    for (int i = 0; i < eta; ++i) {
      accepted.push_back(remaining[static_cast<std::size_t>(i)]);
      current.add(remaining[static_cast<std::size_t>(i)]);
    }
    remaining.erase(remaining.begin(), remaining.begin() + eta);
    if (remaining.empty()) break;
    // Keep only elements that can still individually extend the solution.
    const auto feasible = feasible_with_batch(system, current, remaining, ledger);
    std::vector<ElementId> survivors;
    survivors.reserve(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (feasible[i]) survivors.push_back(remaining[i]);
    // eta = 0 only happens when the front element was infeasible, so the
    // filter always removes at least that element and the loop progresses.
    remaining = std::move(survivors);
  }
  return accepted;
}

SolutionSet unif_sampling(const SolutionSet& input, double phi, Rng& rng) {
  if (phi >= 1.0) return input;
  SolutionSet out(GroundSet{input.universe_size()});
  if (phi <= 0.0) return out;
  for (ElementId e : input.members())
    if (rng.next_bernoulli(phi)) out.add(e);
  return out;
}

namespace {

// |X_j| and the surviving set for one probe: one marginal round over X plus
// one feasibility round over the threshold survivors.
SolutionSet probe_candidate_set(const SubmodularOracle& oracle, const IndependenceSystem& system,
                                const SolutionSet& base, double delta, const SolutionSet& x,
                                RunLedger& ledger, BatchObserver* observer) {
  SolutionSet out(GroundSet{x.universe_size()});
  if (x.empty()) return out;
  const std::vector<ElementId> candidates(x.members().begin(), x.members().end());
  const auto gains = marginal_batch(oracle, base, candidates, ledger, observer);
  std::vector<ElementId> passers;
  passers.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (gains[i] >= delta) passers.push_back(candidates[i]);
  if (passers.empty()) return out;
  const auto feasible = feasible_with_batch(system, base, passers, ledger);
  for (std::size_t i = 0; i < passers.size(); ++i)
    if (feasible[i]) out.add(passers[i]);
  return out;
}

SolutionSet with_prefix(const SolutionSet& s, std::span<const ElementId> sequence, int len) {
  SolutionSet out = s;
  for (int i = 0; i < len; ++i) out.add(sequence[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

SolutionSet threshold_candidates(const SubmodularOracle& oracle, const IndependenceSystem& system,
                                 const SolutionSet& s, double delta, const SolutionSet& pool,
                                 RunLedger& ledger, BatchObserver* observer) {
  if (!(delta > 0.0)) throw std::invalid_argument("threshold must be positive");
  return probe_candidate_set(oracle, system, s, delta, pool, ledger, observer);
}

int binary_search_eta(const SubmodularOracle& oracle, const IndependenceSystem& system,
                      const SolutionSet& s, std::span<const ElementId> sequence,
                      const SolutionSet& x, double delta, double epsilon, RunLedger& ledger,
                      SolutionSet* x_eta, BatchObserver* observer) {
  const int t = static_cast<int>(sequence.size());
  if (x.empty()) throw std::invalid_argument("binary_search_eta requires a non-empty X");
  const double shrink_bound = (1.0 - epsilon) * static_cast<double>(x.size());

  std::map<int, SolutionSet> probed;
  auto size_at = [&](int j) -> int {
    auto it = probed.find(j);
    if (it == probed.end()) {
      it = probed
               .emplace(j, probe_candidate_set(oracle, system, with_prefix(s, sequence, j - 1),
                                               delta, x, ledger, observer))
               .first;
    }
    return it->second.size();
  };

  const int eta = eta_search(t, [&](int j) {
    return static_cast<double>(size_at(j)) < shrink_bound;
  });
  if (eta <= t) size_at(eta);

  // |X_j| must be non-increasing in j; anything else breaks the submodular
  // shrinkage argument the search relies on.
  int prev_size = x.size() + 1;
  for (const auto& [j, set] : probed) {
    if (set.size() > prev_size)
      throw std::logic_error("candidate-set sizes increased along the sequence");
    prev_size = set.size();
  }

  if (x_eta) {
    if (eta > t) {
      // The sequence is maximal within X: every survivor is either in the
      // sequence (zero marginal) or infeasible with it, so X_{t+1} is empty.
      *x_eta = SolutionSet(GroundSet{x.universe_size()});
    } else {
      *x_eta = std::move(probed.at(eta));
    }
  }
  return eta;
}

SolutionSet rand_sampling(const SubmodularOracle& oracle, const SolutionSet& pool,
                          const IndependenceSystem& system, double lambda, double epsilon,
                          double phi1, const Rng& rng, RunLedger& ledger, TraceSink* trace,
                          int trace_iteration, BatchObserver* observer) {
  SolutionSet s(oracle.ground());
  if (pool.empty()) return s;

  // Seed the threshold with the best feasible singleton; the same batch pair
  // gives the initial candidate set.
  std::vector<ElementId> elements;
  elements.reserve(static_cast<std::size_t>(pool.size()));
  for (ElementId e = 0; e < pool.universe_size(); ++e)
    if (pool.contains(e)) elements.push_back(e);
  const auto gains = marginal_batch(oracle, s, elements, ledger, observer);
  const auto singleton_ok = feasible_with_batch(system, s, elements, ledger);

  double delta = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (singleton_ok[i] && (!any || gains[i] > delta)) {
      delta = gains[i];
      any = true;
    }
  }
  if (!any || !(delta > 0.0)) return s;
  const double delta_floor = lambda * delta;

  SolutionSet x(oracle.ground());
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (singleton_ok[i] && gains[i] >= delta) x.add(elements[i]);

  int level = 0;
  while (delta >= delta_floor) {
    if (trace)
      trace->push_back({TraceEvent::Kind::Level, trace_iteration, level, -1, delta, x.size(), 0,
                        0, s.size(), {}, ledger});
    int inner = 0;
    while (!x.empty()) {
      Rng step_rng = rng.substream(static_cast<std::uint64_t>(level) + 1,
                                   static_cast<std::uint64_t>(inner));
      const std::vector<ElementId> sequence = rand_sequence(x, s, system, step_rng, ledger);
      SolutionSet x_next(oracle.ground());
      const int eta =
          binary_search_eta(oracle, system, s, sequence, x, delta, epsilon, ledger, &x_next,
                            observer);
      SolutionSet prefix(oracle.ground());
      const int prefix_len = std::min<int>(eta - 1, static_cast<int>(sequence.size()));
      for (int i = 0; i < prefix_len; ++i) prefix.add(sequence[static_cast<std::size_t>(i)]);
      const SolutionSet admitted = unif_sampling(prefix, phi1, step_rng);

      const int s_before = s.size();
      for (ElementId e : admitted.members()) s.add(e);
      assert(system.feasible(s) && "intermediate solution left the feasible region");
      x = std::move(x_next);

      if (trace) {
        std::vector<ElementId> ids(admitted.members().begin(), admitted.members().end());
        trace->push_back({TraceEvent::Kind::Inner, trace_iteration, level, inner, delta, x.size(),
                          eta, admitted.size(), s_before, std::move(ids), ledger});
      }
      ++inner;
    }
    ++level;
    delta *= (1.0 - epsilon);
    if (delta < delta_floor) break;
    x = threshold_candidates(oracle, system, s, delta, pool, ledger, observer);
  }
  return s;
}

RunResult rep_sampling(const SubmodularOracle& oracle, const IndependenceSystem& system,
                       const SamplingParams& params, RunLedger& ledger,
                       std::optional<int> p_override, TraceSink* trace,
                       BatchObserver* observer) {
  params.validate();
  const int p = p_override.value_or(system.p());
  if (p < 1) throw std::invalid_argument("system parameter p must be at least 1");
  const double lambda = derive_lambda(params.epsilon, p, params.m);

  const Rng run_rng(params.seed);
  SolutionSet pool = SolutionSet::full(oracle.ground());

  std::vector<SolutionSet> omegas, lambdas;
  omegas.reserve(static_cast<std::size_t>(params.m));
  lambdas.reserve(static_cast<std::size_t>(params.m));
  for (int j = 0; j < params.m; ++j) {
    const Rng iter_rng = run_rng.substream(static_cast<std::uint64_t>(j) + 1);
    SolutionSet omega = rand_sampling(oracle, pool, system, lambda, params.epsilon, params.phi1,
                                      iter_rng, ledger, trace, j, observer);
    Rng sample_rng = iter_rng.substream(0, 1);
    SolutionSet lambda_set = unif_sampling(omega, params.phi2, sample_rng);
    assert(system.feasible(lambda_set) && "subsample must stay feasible (downward closure)");
    pool = difference(pool, omega);
    omegas.push_back(std::move(omega));
    lambdas.push_back(std::move(lambda_set));
  }

  // One final round values every distinct candidate: the run never queried
  // f(Omega_j) directly, so the winner's value is re-evaluated here (counted).
  std::vector<SolutionSet> queries;
  std::vector<int> omega_slot(omegas.size()), lambda_slot(lambdas.size());
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    omega_slot[j] = static_cast<int>(queries.size());
    queries.push_back(omegas[j]);
    if (lambdas[j] == omegas[j]) {
      lambda_slot[j] = omega_slot[j];
    } else {
      lambda_slot[j] = static_cast<int>(queries.size());
      queries.push_back(lambdas[j]);
    }
  }
  const auto values = value_batch(oracle, queries, ledger, observer);

  RunResult result{SolutionSet(oracle.ground()), 0.0, {}, {}};
  bool have_best = false;
  double best = 0.0;
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    const double omega_value = values[static_cast<std::size_t>(omega_slot[j])];
    const double lambda_value = values[static_cast<std::size_t>(lambda_slot[j])];
    result.per_iteration.emplace_back(omega_value, lambda_value);
    if (!have_best || omega_value > best) {
      best = omega_value;
      result.solution = omegas[j];
      have_best = true;
    }
    if (lambda_value > best) {
      best = lambda_value;
      result.solution = lambdas[j];
    }
  }
  result.value = best;
  result.ledger = ledger;
  return result;
}

}  // namespace subopt
