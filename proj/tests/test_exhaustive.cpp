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
using testing::CountingSystem;
using testing::FunctionOracle;

TEST_CASE("brute force examples") {
  SUBCASE("modular under a uniform matroid") {
    ModularObjective oracle({3.0, 1.0, 2.0});
    UniformMatroid m(GroundSet{3}, 2);
    const auto result = brute_force_opt(oracle, m, SolutionSet::full(GroundSet{3}));
    CHECK(result.opt_set == SolutionSet(GroundSet{3}, {0, 2}));
    CHECK(result.opt_value == 5.0);
  }
  SUBCASE("zero objective ties to the empty set") {
    ModularObjective oracle({0.0, 0.0, 0.0});
    UniformMatroid m(GroundSet{3}, 3);
    const auto result = brute_force_opt(oracle, m, SolutionSet::full(GroundSet{3}));
    CHECK(result.opt_value == 0.0);
    CHECK(result.opt_set.empty());
  }
  SUBCASE("unconstrained cut triangle") {
    CutObjective oracle(CutGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}));
    UniformMatroid free(GroundSet{3}, 3);
    const auto result = brute_force_opt(oracle, free, SolutionSet::full(GroundSet{3}));
    CHECK(result.opt_value == 2.0);
    CHECK(result.opt_set.size() == 1);  // first singleton wins the tie
  }
}

TEST_CASE("brute force guards and accounting") {
  ModularObjective oracle(std::vector<double>(23, 1.0));
  UniformMatroid m(GroundSet{23}, 3);
  CHECK_THROWS_AS(brute_force_opt(oracle, m, SolutionSet::full(GroundSet{23})),
                  std::invalid_argument);

  // Enumeration touches every subset exactly once.
  ModularObjective small({1.0, 2.0, 3.0, 4.0});
  UniformMatroid k2(GroundSet{4}, 2);
  CountingSystem counter(k2);
  const auto result = brute_force_opt(small, counter, SolutionSet::full(GroundSet{4}));
  CHECK(counter.calls() == 16);
  CHECK(result.feasible_count == 1 + 4 + 6);
  CHECK(result.opt_value == 7.0);
}

TEST_CASE("brute force agrees with greedy on modular plus matroid") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    InstanceSpec spec;
    spec.n = 10;
    spec.seed = seed;
    spec.objective = {{"kind", "modular"}};
    spec.constraint = {{"kind", "partition"}, {"num_blocks", 3}, {"cap", 2}};
    const Instance instance = generate_instance(spec);
    RunLedger ledger;
    double greedy_value = 0.0;
    greedy(*instance.oracle, *instance.system, SolutionSet::full(GroundSet{10}), ledger,
           &greedy_value);
    const auto brute =
        brute_force_opt(*instance.oracle, *instance.system, SolutionSet::full(GroundSet{10}));
    CHECK(greedy_value == brute.opt_value);
  }
}

TEST_CASE("monte carlo estimation") {
  SUBCASE("deterministic runner has zero stderr") {
    const auto est = estimate_expected_value([](std::uint64_t) { return 2.5; }, 64, 0);
    CHECK(est.mean == 2.5);
    CHECK(est.stderr_of_mean == 0.0);
  }
  SUBCASE("fair coin concentrates around one half") {
    const auto est = estimate_expected_value(
        [](std::uint64_t seed) { return Rng(seed).next_bernoulli(0.5) ? 1.0 : 0.0; }, 2000, 7);
    CHECK(std::fabs(est.mean - 0.5) <= 3.0 * est.stderr_of_mean + 1e-12);
  }
  SUBCASE("too few trials is an error") {
    CHECK_THROWS_AS(estimate_expected_value([](std::uint64_t) { return 0.0; }, 5, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("half-probability sampling estimates") {
  SUBCASE("modular expectation is half the total weight") {
    ModularObjective oracle({1.0, 2.0, 3.0, 4.0});
    const auto est = quarter_sampling_check(oracle, 4000, 11);
    CHECK(std::fabs(est.mean - 5.0) <= 3.0 * est.stderr_of_mean);
  }
  SUBCASE("constant oracle is exact") {
    FunctionOracle oracle(GroundSet{4}, [](const SolutionSet&) { return 3.0; });
    const auto est = quarter_sampling_check(oracle, 100, 1);
    CHECK(est.mean == 3.0);
    CHECK(est.stderr_of_mean == 0.0);
  }
  SUBCASE("cut graph clears a quarter of the optimum") {
    InstanceSpec spec;
    spec.n = 10;
    spec.seed = 3;
    spec.objective = {{"kind", "cut"}};
    spec.constraint = {{"kind", "uniform"}, {"k", 10}};
    const Instance instance = generate_instance(spec);
    const auto opt = brute_force_opt(*instance.oracle, *instance.system,
                                     SolutionSet::full(GroundSet{10}));
    const auto est = quarter_sampling_check(*instance.oracle, 2000, 5);
    CHECK(est.mean >= opt.opt_value / 4.0 - 3.0 * est.stderr_of_mean);
  }
}
