#include "subopt/oracles.hpp"

#include "subopt/parallel.hpp"

namespace subopt {

void SubmodularOracle::marginals(const SolutionSet& base, double base_value,
                                 std::span<const ElementId> candidates,
                                 std::span<double> out) const {
  assert(out.size() == candidates.size());
  parallel_for(static_cast<std::int64_t>(candidates.size()), [&](std::int64_t i) {
    const ElementId e = candidates[static_cast<std::size_t>(i)];
    if (base.contains(e)) {
      out[static_cast<std::size_t>(i)] = 0.0;
    } else {
      out[static_cast<std::size_t>(i)] = value_unmetered(base.with(e)) - base_value;
    }
  });
}

namespace kernels {

void eval_sets(const SubmodularOracle& oracle, std::span<const SolutionSet> sets,
               std::span<double> out) {
  parallel_for(static_cast<std::int64_t>(sets.size()), [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = oracle.value_unmetered(sets[static_cast<std::size_t>(i)]);
  });
}

void eval_sets_serial(const SubmodularOracle& oracle, std::span<const SolutionSet> sets,
                      std::span<double> out) {
  serial_for(static_cast<std::int64_t>(sets.size()), [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = oracle.value_unmetered(sets[static_cast<std::size_t>(i)]);
  });
}

void eval_feasible(const IndependenceSystem& system, std::span<const SolutionSet> sets,
                   std::span<char> out) {
  parallel_for(static_cast<std::int64_t>(sets.size()), [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = system.feasible(sets[static_cast<std::size_t>(i)]) ? 1 : 0;
  });
}

void eval_feasible_serial(const IndependenceSystem& system, std::span<const SolutionSet> sets,
                          std::span<char> out) {
  serial_for(static_cast<std::int64_t>(sets.size()), [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] = system.feasible(sets[static_cast<std::size_t>(i)]) ? 1 : 0;
  });
}

}  // namespace kernels

namespace {

void check_sets_domain(GroundSet ground, std::span<const SolutionSet> sets) {
  if (sets.empty()) throw std::invalid_argument("batch call requires a non-empty query list");
  for (const SolutionSet& s : sets)
    if (s.universe_size() != ground.n)
      throw std::invalid_argument("solution set does not match oracle ground set");
}

void check_candidates_domain(GroundSet ground, std::span<const ElementId> candidates) {
  for (ElementId e : candidates)
    if (!ground.contains(e)) throw std::invalid_argument("candidate element outside ground set");
}

// One query per entry; the first f(empty) of the run is charged, repeats are
// cache hits and free.
long long charge_values(RunLedger& ledger, std::span<const SolutionSet> sets) {
  long long queries = 0;
  for (const SolutionSet& s : sets) {
    if (s.empty()) {
      if (!ledger.empty_value_charged) {
        ledger.empty_value_charged = true;
        ++queries;
      }
    } else {
      ++queries;
    }
  }
  return queries;
}

void observe_and_enforce(BatchObserver* observer, std::span<const SolutionSet> sets,
                         std::span<const double> values, const RunLedger& ledger) {
  if (!observer) return;
  for (std::size_t i = 0; i < sets.size(); ++i) observer->on_value(sets[i], values[i]);
  if (observer->budget_exceeded(ledger)) throw BudgetExhausted{};
}

}  // namespace

std::vector<double> value_batch(const SubmodularOracle& oracle, std::span<const SolutionSet> sets,
                                RunLedger& ledger, BatchObserver* observer) {
  check_sets_domain(oracle.ground(), sets);
  std::vector<double> out(sets.size());
  kernels::eval_sets(oracle, sets, out);
  ledger.value_queries += charge_values(ledger, sets);
  ledger.value_rounds += 1;
  observe_and_enforce(observer, sets, out, ledger);
  return out;
}

std::vector<double> marginal_batch(const SubmodularOracle& oracle, const SolutionSet& base,
                                   std::span<const ElementId> candidates, RunLedger& ledger,
                                   BatchObserver* observer) {
  if (base.universe_size() != oracle.n())
    throw std::invalid_argument("base set does not match oracle ground set");
  if (candidates.empty())
    throw std::invalid_argument("batch call requires a non-empty query list");
  check_candidates_domain(oracle.ground(), candidates);

  const double base_value = oracle.value_unmetered(base);
  std::vector<double> out(candidates.size());
  oracle.marginals(base, base_value, candidates, out);

  // f(base) is evaluated once and shared by the whole batch, but it is still
  // a query; every candidate costs one more.
  if (base.empty()) {
    if (!ledger.empty_value_charged) {
      ledger.empty_value_charged = true;
      ledger.value_queries += 1;
    }
  } else {
    ledger.value_queries += 1;
  }
  ledger.value_queries += static_cast<long long>(candidates.size());
  ledger.value_rounds += 1;

  if (observer) {
    observer->on_value(base, base_value);  // the shared base query
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const ElementId e = candidates[i];
      observer->on_value(base.contains(e) ? base : base.with(e), base_value + out[i]);
    }
    if (observer->budget_exceeded(ledger)) throw BudgetExhausted{};
  }
  return out;
}

std::vector<char> feasible_batch(const IndependenceSystem& system,
                                 std::span<const SolutionSet> sets, RunLedger& ledger) {
  check_sets_domain(system.ground(), sets);
  std::vector<char> out(sets.size());
  kernels::eval_feasible(system, sets, out);
  ledger.indep_queries += static_cast<long long>(sets.size());
  ledger.indep_rounds += 1;
  return out;
}

std::vector<char> feasible_with_batch(const IndependenceSystem& system, const SolutionSet& base,
                                      std::span<const ElementId> candidates, RunLedger& ledger) {
  if (base.universe_size() != system.n())
    throw std::invalid_argument("base set does not match system ground set");
  if (candidates.empty())
    throw std::invalid_argument("batch call requires a non-empty query list");
  check_candidates_domain(system.ground(), candidates);

  std::vector<char> out(candidates.size());
  parallel_for(static_cast<std::int64_t>(candidates.size()), [&](std::int64_t i) {
    const ElementId e = candidates[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] =
        system.feasible(base.contains(e) ? base : base.with(e)) ? 1 : 0;
  });
  ledger.indep_queries += static_cast<long long>(candidates.size());
  ledger.indep_rounds += 1;
  return out;
}

}  // namespace subopt
