#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>

#include "doctest.h"
#include "reference.hpp"
#include "subopt/constraints.hpp"
#include "subopt/instance.hpp"
#include "subopt/objectives.hpp"
#include "subopt/sampling.hpp"

using namespace subopt;
using testing::FunctionOracle;

TEST_CASE("parameter presets") {
  SUBCASE("p-system preset") {
    const SamplingParams a = preset_p_system(1, 0.1);
    CHECK(a.m == 2);
    CHECK(a.phi1 == 1.0);
    CHECK(a.phi2 == 0.5);
    CHECK(a.lambda == doctest::Approx(0.1));
    CHECK(preset_p_system(7, 0.1).m == 3);
    CHECK(preset_p_system(2, 0.1).m == 3);
  }
  SUBCASE("p-extendible preset") {
    const SamplingParams a = preset_p_extendible(1, 0.01);
    CHECK(a.m == 1);
    CHECK(a.phi1 == doctest::Approx(0.5));
    CHECK(a.phi2 == 1.0);
    CHECK(preset_p_extendible(3, 0.1).phi1 == doctest::Approx(0.25));
    CHECK(preset_p_extendible(1, 0.5).lambda == doctest::Approx(1.0));
  }
  SUBCASE("validation") {
    SamplingParams bad;
    bad.epsilon = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(preset_p_system(0, 0.1), std::invalid_argument);
  }
}

TEST_CASE("unif_sampling endpoints and concentration") {
  const GroundSet g{1000};
  const SolutionSet a = SolutionSet::full(g);
  Rng rng(1);
  CHECK(unif_sampling(a, 1.0, rng) == a);
  CHECK(unif_sampling(a, 0.0, rng).empty());

  int within = 0;
  const int seeds = 500;
  for (int s = 0; s < seeds; ++s) {
    Rng r(static_cast<std::uint64_t>(s));
    const int size = unif_sampling(a, 0.5, r).size();
    if (std::abs(size - 500) <= 50) ++within;
  }
  CHECK(within >= seeds * 99 / 100);
}

TEST_CASE("prefix_feasible_max") {
  const GroundSet g{12};
  RunLedger ledger;
  SUBCASE("all prefixes feasible") {
    UniformMatroid loose(g, 12);
    const ElementId seq[] = {3, 1, 4, 5};
    CHECK(prefix_feasible_max(seq, SolutionSet(g), loose, ledger) == 4);
  }
  SUBCASE("first element infeasible") {
    UniformMatroid zero(g, 0);
    const ElementId seq[] = {3, 1};
    CHECK(prefix_feasible_max(seq, SolutionSet(g), zero, ledger) == 0);
  }
  SUBCASE("cap minus current size") {
    UniformMatroid k2(g, 2);
    const ElementId seq[] = {0, 1, 2, 3, 4};
    CHECK(prefix_feasible_max(seq, SolutionSet(g, {9}), k2, ledger) == 1);
  }
  CHECK(ledger.value_queries == 0);  // feasibility only
}

TEST_CASE("rand_sequence maximal extensions") {
  const GroundSet g{10};
  SUBCASE("empty pool") {
    UniformMatroid m(g, 3);
    Rng rng(0);
    RunLedger ledger;
    CHECK(rand_sequence(SolutionSet(g), SolutionSet(g), m, rng, ledger).empty());
  }
  SUBCASE("uniform matroid always fills the cap") {
    UniformMatroid m(g, 3);
    for (int seed = 0; seed < 50; ++seed) {
      Rng rng(static_cast<std::uint64_t>(seed));
      RunLedger ledger;
      const SolutionSet pool = SolutionSet::full(g);
      const auto a = rand_sequence(pool, SolutionSet(g), m, rng, ledger);
      CHECK(a.size() == 3);
      CHECK(ledger.value_queries == 0);
    }
  }
  SUBCASE("partition matroid picks one per block") {
    const GroundSet g4{4};
    PartitionMatroid m(g4, {{0, 1}, {2, 3}}, {1, 1});
    const SolutionSet pool = SolutionSet::full(g4);
    for (int seed = 0; seed < 50; ++seed) {
      Rng rng(static_cast<std::uint64_t>(seed) + 100);
      RunLedger ledger;
      const auto a = rand_sequence(pool, SolutionSet(g4), m, rng, ledger);
      CHECK(a.size() == 2);
      CHECK(testing::is_maximal_extension(m, SolutionSet(g4), a, pool));
    }
  }
  SUBCASE("maximality against a group-cap pool") {
    GroupCapSystem system(g, {{0, 1, 2, 3, 4}, {3, 4, 5, 6}, {6, 7, 8}}, {2, 1, 2});
    SolutionSet pool(g);
    for (ElementId e : {0, 1, 3, 4, 5, 6, 7, 9}) pool.add(e);
    for (int seed = 0; seed < 100; ++seed) {
      Rng rng(static_cast<std::uint64_t>(seed));
      RunLedger ledger;
      const SolutionSet s(g, {8});
      const auto a = rand_sequence(pool, s, system, rng, ledger);
      CHECK(testing::is_maximal_extension(system, s, a, pool));
    }
  }
}

TEST_CASE("eta_search equals a linear scan on random monotone profiles") {
  Rng rng(55);
  for (int trial = 0; trial < 1000; ++trial) {
    const int t = 1 + static_cast<int>(rng.next_below(40));
    const int x_size = 1 + static_cast<int>(rng.next_below(30));
    const double epsilon = 0.05 + 0.9 * rng.next_double();
    std::vector<int> profile(static_cast<std::size_t>(t));
    int current = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(x_size) + 1));
    for (int j = t - 1; j >= 0; --j) {  // build non-increasing left to right
      profile[static_cast<std::size_t>(j)] = current;
      current = std::min(x_size, current + static_cast<int>(rng.next_below(3)));
    }
    const double bound = (1.0 - epsilon) * x_size;

    int linear = t + 1;
    for (int j = 1; j <= t; ++j) {
      if (static_cast<double>(profile[static_cast<std::size_t>(j - 1)]) < bound) {
        linear = j;
        break;
      }
    }
    const int fast = eta_search(t, [&](int j) {
      return static_cast<double>(profile[static_cast<std::size_t>(j - 1)]) < bound;
    });
    CHECK(fast == linear);
  }
}

TEST_CASE("binary_search_eta equals the linear-scan reference on live instances") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 7;
  spec.objective = {{"kind", "coverage"}};
  spec.constraint = {{"kind", "groupcap"}, {"num_groups", 3}, {"group_size", 6}, {"cap", 2}};
  const Instance instance = generate_instance(spec);
  const SubmodularOracle& oracle = *instance.oracle;
  const IndependenceSystem& system = *instance.system;

  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    SolutionSet s(oracle.ground());
    SolutionSet x(oracle.ground());
    for (ElementId e = 0; e < 12; ++e) {
      if (rng.next_bernoulli(0.15) && system.feasible(s.with(e))) {
        s.add(e);
      } else if (rng.next_bernoulli(0.6)) {
        x.add(e);
      }
    }
    if (x.empty()) continue;
    Rng seq_rng = rng.substream(1);
    RunLedger scratch;
    SolutionSet x_pool = difference(x, s);
    if (x_pool.empty()) continue;
    const auto sequence = rand_sequence(x_pool, s, system, seq_rng, scratch);
    if (sequence.empty()) continue;
    const double delta = 0.5 + rng.next_double();
    const double epsilon = 0.1 + 0.4 * rng.next_double();

    RunLedger ledger;
    SolutionSet x_eta(oracle.ground());
    const int fast =
        binary_search_eta(oracle, system, s, sequence, x_pool, delta, epsilon, ledger, &x_eta);
    const int slow = testing::linear_scan_eta(oracle, system, s, sequence, x_pool, delta, epsilon);
    CHECK(fast == slow);
    if (fast > static_cast<int>(sequence.size())) CHECK(x_eta.empty());
  }
}

TEST_CASE("binary_search_eta flags non-monotone candidate profiles") {
  // Hand-built non-submodular oracle: element 1 only gains value once
  // element 3 is present, so |X_1| = 1 while |X_2| = 2.
  const GroundSet g{5};
  FunctionOracle oracle(g, [](const SolutionSet& s) {
    double v = 0.0;
    if (s.contains(0)) v += 1.0;
    if (s.contains(1) && s.contains(3)) v += 1.0;
    return v;
  });
  UniformMatroid loose(g, 5);
  const ElementId sequence[] = {3, 2};
  SolutionSet x(g, {0, 1, 4});
  RunLedger ledger;
  CHECK_THROWS_AS(binary_search_eta(oracle, loose, SolutionSet(g), sequence, x, 1.0, 0.1, ledger,
                                    nullptr),
                  std::logic_error);
}

TEST_CASE("threshold_candidates filters by marginal and feasibility in two rounds") {
  SUBCASE("above every marginal") {
    ModularObjective oracle({5.0, 1.0});
    UniformMatroid m(GroundSet{2}, 2);
    RunLedger ledger;
    CHECK(threshold_candidates(oracle, m, SolutionSet(GroundSet{2}), 9.0,
                               SolutionSet::full(GroundSet{2}), ledger)
              .empty());
    CHECK(ledger.value_rounds == 1);
    CHECK(ledger.indep_rounds == 0);  // nothing passed the threshold
  }
  SUBCASE("modular example") {
    ModularObjective oracle({5.0, 1.0});
    UniformMatroid m(GroundSet{2}, 2);
    RunLedger ledger;
    const SolutionSet x = threshold_candidates(oracle, m, SolutionSet(GroundSet{2}), 2.0,
                                               SolutionSet::full(GroundSet{2}), ledger);
    CHECK(x.size() == 1);
    CHECK(x.contains(0));
    CHECK(ledger.value_rounds == 1);
    CHECK(ledger.indep_rounds == 1);
  }
  SUBCASE("cut triangle against enumeration") {
    CutObjective oracle(CutGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}));
    UniformMatroid m(GroundSet{3}, 3);
    RunLedger ledger;
    const SolutionSet s(GroundSet{3}, {0});
    const SolutionSet x =
        threshold_candidates(oracle, m, s, 1.5, SolutionSet::full(GroundSet{3}), ledger);
    // f(1|{0}) = f({0,1}) - f({0}) = 2 - 2 = 0; same for 2. Nothing passes.
    CHECK(x.empty());
  }
}

TEST_CASE("rand_sampling basics") {
  SUBCASE("empty pool") {
    ModularObjective oracle({1.0});
    UniformMatroid m(GroundSet{1}, 1);
    RunLedger ledger;
    CHECK(rand_sampling(oracle, SolutionSet(GroundSet{1}), m, 0.5, 0.2, 1.0, Rng(1), ledger)
              .empty());
    CHECK(ledger.value_rounds == 0);
  }
  SUBCASE("single positive element is taken") {
    ModularObjective oracle({2.0});
    UniformMatroid m(GroundSet{1}, 1);
    RunLedger ledger;
    const SolutionSet s = rand_sampling(oracle, SolutionSet::full(GroundSet{1}), m, 0.5, 0.2,
                                        1.0, Rng(1), ledger);
    CHECK(s.size() == 1);
    CHECK(s.contains(0));
  }
  SUBCASE("zero-valued singletons give an empty solution") {
    ModularObjective oracle({0.0, 0.0});
    UniformMatroid m(GroundSet{2}, 2);
    RunLedger ledger;
    CHECK(rand_sampling(oracle, SolutionSet::full(GroundSet{2}), m, 0.5, 0.2, 1.0, Rng(1),
                        ledger)
              .empty());
  }
}

TEST_CASE("trace replay confirms the threshold discipline") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 13;
  spec.objective = {{"kind", "modular"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 4}};
  const Instance instance = generate_instance(spec);
  const SubmodularOracle& oracle = *instance.oracle;
  const IndependenceSystem& system = *instance.system;

  SamplingParams params = preset_p_system(1, 0.1, 97);
  RunLedger ledger;
  TraceSink trace;
  const RunResult result = rep_sampling(oracle, system, params, ledger, std::nullopt, &trace);

  // Rebuild each iteration's running solution from the trace and check every
  // admitted element cleared the threshold at its admission point.
  for (int iteration = 0; iteration < params.m; ++iteration) {
    SolutionSet s(oracle.ground());
    for (const TraceEvent& ev : trace) {
      if (ev.iteration != iteration || ev.kind != TraceEvent::Kind::Inner) continue;
      CHECK(ev.s_size_before == s.size());
      const double base_value = oracle.value_unmetered(s);
      for (ElementId e : ev.admitted) {
        CHECK(oracle.value_unmetered(s.with(e)) - base_value >= ev.delta - 1e-9);
        CHECK(system.feasible(s.with(e)));
      }
      for (ElementId e : ev.admitted) s.add(e);
      CHECK(system.feasible(s));
    }
  }
  CHECK(system.feasible(result.solution));
  CHECK(result.value >= 0.0);
}

TEST_CASE("trace shows geometric progress and a bounded level count") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 29;
  spec.objective = {{"kind", "coverage"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 5}};
  const Instance instance = generate_instance(spec);

  const SamplingParams params = preset_p_system(1, 0.25, 3);
  RunLedger ledger;
  TraceSink trace;
  rep_sampling(*instance.oracle, *instance.system, params, ledger, std::nullopt, &trace);

  int levels = 0;
  double prev_x = -1.0;
  for (const TraceEvent& ev : trace) {
    if (ev.kind == TraceEvent::Kind::Level) {
      ++levels;
      prev_x = ev.x_size;
    } else {
      // Every inner step strictly shrinks X below (1 - eps)|X|; the sentinel
      // empties it outright.
      REQUIRE(prev_x >= 1.0);
      CHECK(static_cast<double>(ev.x_size) < (1.0 - params.epsilon) * prev_x);
      prev_x = ev.x_size;
    }
  }
  const int max_levels_per_iteration =
      static_cast<int>(std::ceil(std::log(1.0 / params.lambda) /
                                 std::log(1.0 / (1.0 - params.epsilon)))) +
      1;
  CHECK(levels <= params.m * max_levels_per_iteration);
}

TEST_CASE("rep_sampling determinism and m = 1 equivalence") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 31;
  spec.objective = {{"kind", "cut"}};
  spec.constraint = {{"kind", "groupcap"}, {"num_groups", 2}, {"group_size", 7}, {"cap", 2}};
  const Instance instance = generate_instance(spec);
  const SubmodularOracle& oracle = *instance.oracle;
  const IndependenceSystem& system = *instance.system;

  SamplingParams params = preset_p_extendible(system.p(), 0.1, 12345);
  RunLedger ledger_a, ledger_b;
  const RunResult a = rep_sampling(oracle, system, params, ledger_a);
  const RunResult b = rep_sampling(oracle, system, params, ledger_b);
  CHECK(a.solution == b.solution);
  CHECK(a.value == b.value);
  CHECK(ledger_a == ledger_b);

  // m = 1, phi2 = 1: the result is exactly the single rand_sampling output.
  REQUIRE(params.m == 1);
  REQUIRE(params.phi2 == 1.0);
  CHECK(a.per_iteration.size() == 1);
  CHECK(a.per_iteration[0].first == a.per_iteration[0].second);

  RunLedger ledger_c;
  const SolutionSet omega =
      rand_sampling(oracle, SolutionSet::full(oracle.ground()), system, params.lambda,
                    params.epsilon, params.phi1, Rng(params.seed).substream(1), ledger_c);
  CHECK(a.solution == omega);
}

TEST_CASE("changing m does not reshuffle earlier iterations") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 59;
  spec.objective = {{"kind", "coverage"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 4}};
  const Instance instance = generate_instance(spec);

  // Same epsilon and seed; p overrides chosen so lambda = eps(p+1)/m matches
  // across the two runs, making iteration 0 identical by construction.
  SamplingParams one;
  one.epsilon = 0.2, one.m = 1, one.phi1 = 1.0, one.phi2 = 0.5, one.seed = 321;
  SamplingParams two = one;
  two.m = 2;

  RunLedger la, lb;
  TraceSink ta, tb;
  rep_sampling(*instance.oracle, *instance.system, one, la, 1, &ta);
  rep_sampling(*instance.oracle, *instance.system, two, lb, 3, &tb);

  std::vector<std::vector<ElementId>> first_a, first_b;
  for (const TraceEvent& ev : ta)
    if (ev.iteration == 0 && ev.kind == TraceEvent::Kind::Inner) first_a.push_back(ev.admitted);
  for (const TraceEvent& ev : tb)
    if (ev.iteration == 0 && ev.kind == TraceEvent::Kind::Inner) first_b.push_back(ev.admitted);
  CHECK(first_a == first_b);
  CHECK(!first_a.empty());
}

TEST_CASE("rep_sampling on a zero objective returns the empty set") {
  ModularObjective oracle({0.0, 0.0, 0.0});
  UniformMatroid m(GroundSet{3}, 2);
  RunLedger ledger;
  const RunResult result = rep_sampling(oracle, m, preset_p_system(1, 0.1, 5), ledger);
  CHECK(result.solution.empty());
  CHECK(result.value == 0.0);
}

TEST_CASE("rep_sampling iterations use disjoint pools") {
  InstanceSpec spec;
  spec.n = 12;
  spec.seed = 41;
  spec.objective = {{"kind", "coverage"}};
  spec.constraint = {{"kind", "uniform"}, {"k", 3}};
  const Instance instance = generate_instance(spec);

  SamplingParams params = preset_p_system(2, 0.1, 7);  // m = 3
  REQUIRE(params.m == 3);
  RunLedger ledger;
  TraceSink trace;
  rep_sampling(*instance.oracle, *instance.system, params, ledger, 2, &trace);

  std::vector<SolutionSet> omegas(static_cast<std::size_t>(params.m),
                                  SolutionSet(instance.oracle->ground()));
  for (const TraceEvent& ev : trace)
    if (ev.kind == TraceEvent::Kind::Inner)
      for (ElementId e : ev.admitted) omegas[static_cast<std::size_t>(ev.iteration)].add(e);
  for (std::size_t i = 0; i < omegas.size(); ++i)
    for (std::size_t j = i + 1; j < omegas.size(); ++j)
      for (ElementId e : omegas[j].members()) CHECK_FALSE(omegas[i].contains(e));
}
