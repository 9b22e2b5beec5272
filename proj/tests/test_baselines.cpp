#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "reference.hpp"
#include "subopt/baselines.hpp"
#include "subopt/constraints.hpp"
#include "subopt/exhaustive.hpp"
#include "subopt/instance.hpp"
#include "subopt/objectives.hpp"

using namespace subopt;

TEST_CASE("defaults derived from p") {
  CHECK(default_sample_probability(1) == doctest::Approx(0.5));
  CHECK(default_sample_probability(3) == doctest::Approx(0.25));
  CHECK(default_repeated_greedy_iterations(1) == 2);
  CHECK(default_repeated_greedy_iterations(4) == 3);
}

TEST_CASE("greedy picks the top-k weights under a uniform matroid") {
  ModularObjective oracle({3.0, 7.0, 1.0, 9.0, 4.0});
  UniformMatroid m(GroundSet{5}, 2);
  RunLedger ledger;
  double value = 0.0;
  const SolutionSet s = greedy(oracle, m, SolutionSet::full(GroundSet{5}), ledger, &value);
  CHECK(s == SolutionSet(GroundSet{5}, {1, 3}));
  CHECK(value == 16.0);
}

TEST_CASE("greedy on a zero objective returns the empty set") {
  ModularObjective oracle({0.0, 0.0});
  UniformMatroid m(GroundSet{2}, 2);
  RunLedger ledger;
  CHECK(greedy(oracle, m, SolutionSet::full(GroundSet{2}), ledger).empty());
  CHECK(ledger.value_rounds == 1);  // a single empty-improvement round
}

TEST_CASE("greedy adaptivity is accepted elements plus one") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 2;
  spec.objective = {{"kind", "coverage"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 4}};
  const Instance instance = generate_instance(spec);
  RunLedger ledger;
  const SolutionSet s =
      greedy(*instance.oracle, *instance.system, SolutionSet::full(GroundSet{12}), ledger);
  CHECK(ledger.value_rounds == s.size() + 1);
  CHECK(instance.system->feasible(s));
}

TEST_CASE("greedy reaches the classical coverage guarantee") {
  InstanceSpec spec;
  spec.n = 10;
  spec.seed = 23;
  spec.objective = {{"kind", "coverage"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 3}};
  const Instance instance = generate_instance(spec);
  RunLedger ledger;
  double value = 0.0;
  greedy(*instance.oracle, *instance.system, SolutionSet::full(GroundSet{10}), ledger, &value);
  const BruteForceResult opt = brute_force_opt(*instance.oracle, *instance.system,
                                               SolutionSet::full(GroundSet{10}));
  CHECK(value >= (1.0 - 1.0 / std::exp(1.0)) * opt.opt_value - 1e-9);
}

TEST_CASE("repeated greedy") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 17;
  spec.objective = {{"kind", "cut"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 4}};
  const Instance instance = generate_instance(spec);
  const SubmodularOracle& oracle = *instance.oracle;
  const IndependenceSystem& system = *instance.system;

  SUBCASE("one iteration equals plain greedy") {
    RunLedger a, b;
    CHECK(repeated_greedy(oracle, system, 1, a) ==
          greedy(oracle, system, SolutionSet::full(oracle.ground()), b));
  }
  SUBCASE("best of three beats or ties a single run, rounds disjoint") {
    RunLedger a, b;
    double single_value = 0.0;
    greedy(oracle, system, SolutionSet::full(oracle.ground()), a, &single_value);
    std::vector<SolutionSet> rounds;
    const SolutionSet best = repeated_greedy(oracle, system, 3, b, nullptr, &rounds);
    CHECK(oracle.value_unmetered(best) >= single_value - 1e-9);
    for (std::size_t i = 0; i < rounds.size(); ++i)
      for (std::size_t j = i + 1; j < rounds.size(); ++j)
        for (ElementId e : rounds[j].members()) CHECK_FALSE(rounds[i].contains(e));
  }
  SUBCASE("rejects nonsense iteration counts") {
    RunLedger ledger;
    CHECK_THROWS_AS(repeated_greedy(oracle, system, 0, ledger), std::invalid_argument);
  }
}

TEST_CASE("sample greedy endpoints") {
  InstanceSpec spec;
  spec.n = 10;
  spec.seed = 5;
  spec.objective = {{"kind", "coverage"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 3}};
  const Instance instance = generate_instance(spec);

  RunLedger a;
  Rng zero_rng(1);
  CHECK(sample_greedy(*instance.oracle, *instance.system, 0.0, zero_rng, a).empty());
  CHECK(a.value_rounds == 0);

  RunLedger b, c;
  Rng one_rng(1);
  CHECK(sample_greedy(*instance.oracle, *instance.system, 1.0, one_rng, b) ==
        greedy(*instance.oracle, *instance.system, SolutionSet::full(GroundSet{10}), c));
  CHECK(b == c);
}

TEST_CASE("sample greedy meets the extendible-system bound on average") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 71;
  spec.objective = {{"kind", "cut"}};
  spec.constraint = {{"kind", "intersection"},
                     {"members", {{{"kind", "uniform"}, {"k", 4}},
                                  {{"kind", "partition"}, {"num_blocks", 3}, {"cap", 2}}}}};
  const Instance instance = generate_instance(spec);
  const int p = instance.system->p();
  REQUIRE(p == 2);

  const BruteForceResult opt = brute_force_opt(*instance.oracle, *instance.system,
                                               SolutionSet::full(GroundSet{12}));
  const auto estimate = estimate_expected_value(
      [&](std::uint64_t seed) {
        RunLedger ledger;
        Rng rng(seed);
        const SolutionSet s = sample_greedy(*instance.oracle, *instance.system,
                                            default_sample_probability(p), rng, ledger);
        return instance.oracle->value_unmetered(s);
      },
      500, 1000);

  const double bound = opt.opt_value * p / ((p + 1.0) * (p + 1.0));
  CHECK(estimate.mean >= bound - 3.0 * estimate.stderr_of_mean);
}
