// subopt: generate instances, run algorithms, and benchmark them.
//
// Exit codes: 0 success, 1 configuration error, 2 partial bench failure.

#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "subopt/bench.hpp"
#include "subopt/exhaustive.hpp"
#include "subopt/instance.hpp"
#include "subopt/parallel.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string instance_file;
  std::string objective = "cut";
  std::string constraint = "uniform";
  int n = 12;
  std::uint64_t gen_seed = 1;
};

void add_instance_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--instance", flags->instance_file, "instance spec JSON file");
  cmd->add_option("--objective", flags->objective,
                  "objective kind (modular|coverage|cut|logdet|entropy)");
  cmd->add_option("--constraint", flags->constraint,
                  "constraint kind (uniform|partition|intersection|groupcap)");
  cmd->add_option("--n", flags->n, "ground-set size");
  cmd->add_option("--gen-seed", flags->gen_seed, "instance generator seed");
}

subopt::InstanceSpec resolve_instance(const CommonFlags& flags) {
  if (!flags.instance_file.empty()) return subopt::load_instance_spec(flags.instance_file);
  subopt::InstanceSpec spec;
  spec.n = flags.n;
  spec.seed = flags.gen_seed;
  spec.objective = json{{"kind", flags.objective}};
  if (flags.constraint == "intersection") {
    spec.constraint = json{{"kind", "intersection"},
                           {"members", json::array({json{{"kind", "uniform"}},
                                                    json{{"kind", "partition"}}})}};
  } else {
    spec.constraint = json{{"kind", flags.constraint}};
  }
  return spec;
}

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("config error: cannot write " + out_path);
  out << text;
}

json solution_json(const subopt::SolutionSet& s) {
  return json(s.sorted_members());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive-sampling submodular maximization benchmark"};
  app.require_subcommand(1);

  int threads = 0;
  bool serial = false;
  app.add_option("--threads", threads, "cap batch parallelism (overrides SUBOPT_THREADS)");
  app.add_flag("--serial", serial, "force the serial reference kernels");

  CommonFlags flags;

  // gen: write an instance spec
  auto* gen = app.add_subcommand("gen", "generate an instance spec");
  add_instance_flags(gen, &flags);
  std::string gen_out;
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // run: single algorithm run
  auto* run = app.add_subcommand("run", "run one algorithm on one instance");
  add_instance_flags(run, &flags);
  std::string algo = "rep-sampling";
  std::string preset;
  double epsilon = 0.1;
  std::optional<int> m_opt;
  std::optional<double> phi1_opt, phi2_opt;
  std::optional<int> p_opt;
  std::uint64_t seed = 0;
  long long budget = -1;
  std::string run_out, trace_path;
  std::optional<int> iterations_opt;
  std::optional<double> probability_opt;
  run->add_option("--algo", algo, "rep-sampling|greedy|repeated-greedy|sample-greedy");
  run->add_option("--preset", preset, "p-system|p-extendible");
  run->add_option("--epsilon", epsilon, "threshold decay rate");
  run->add_option("--m", [&m_opt](auto& vals) { m_opt = std::stoi(vals[0]); return true; },
                  "number of sampling iterations");
  run->add_option("--phi1",
                  [&phi1_opt](auto& vals) { phi1_opt = std::stod(vals[0]); return true; },
                  "prefix sampling probability");
  run->add_option("--phi2",
                  [&phi2_opt](auto& vals) { phi2_opt = std::stod(vals[0]); return true; },
                  "subsample probability");
  run->add_option("--p", [&p_opt](auto& vals) { p_opt = std::stoi(vals[0]); return true; },
                  "override the declared system parameter p");
  run->add_option("--iterations",
                  [&iterations_opt](auto& vals) { iterations_opt = std::stoi(vals[0]); return true; },
                  "repeated-greedy iterations");
  run->add_option("--probability",
                  [&probability_opt](auto& vals) { probability_opt = std::stod(vals[0]); return true; },
                  "sample-greedy probability");
  run->add_option("--seed", seed, "run seed");
  run->add_option("--budget", budget, "truncate after this many value queries (-1 = unlimited)");
  run->add_option("--out", run_out, "result JSON output (default stdout)");
  run->add_option("--trace", trace_path, "write a JSON-lines trace of the run");

  // bench: plan of cells
  auto* bench = app.add_subcommand("bench", "run a benchmark plan");
  add_instance_flags(bench, &flags);
  std::string plan_path, bench_out;
  long long trials = 1;
  std::uint64_t bench_seed = 0;
  long long bench_budget = -1;
  std::string bench_algo = "rep-sampling";
  std::string bench_preset;
  double bench_epsilon = 0.1;
  std::optional<int> bench_m, bench_p;
  std::optional<double> bench_phi1, bench_phi2;
  bool no_wall_time = false;
  bench->add_option("--plan", plan_path, "JSON plan file (array of cells)");
  bench->add_option("--algo", bench_algo, "algorithm for the single-cell plan");
  bench->add_option("--preset", bench_preset, "p-system|p-extendible");
  bench->add_option("--epsilon", bench_epsilon, "threshold decay rate");
  bench->add_option("--m", [&bench_m](auto& vals) { bench_m = std::stoi(vals[0]); return true; },
                    "number of sampling iterations");
  bench->add_option("--phi1",
                    [&bench_phi1](auto& vals) { bench_phi1 = std::stod(vals[0]); return true; },
                    "prefix sampling probability");
  bench->add_option("--phi2",
                    [&bench_phi2](auto& vals) { bench_phi2 = std::stod(vals[0]); return true; },
                    "subsample probability");
  bench->add_option("--p", [&bench_p](auto& vals) { bench_p = std::stoi(vals[0]); return true; },
                    "override the declared system parameter p");
  bench->add_option("--seed", bench_seed, "first seed");
  bench->add_option("--trials", trials, "number of seeds (seed..seed+trials-1)");
  bench->add_option("--budget", bench_budget, "truncate each run after this many value queries");
  bench->add_option("--out", bench_out, "output prefix; writes <out>.csv and <out>.jsonl");
  bench->add_flag("--no-wall-time", no_wall_time,
                  "omit wall-clock timing so output streams are byte-reproducible");

  // brute: exhaustive optimum
  auto* brute = app.add_subcommand("brute", "brute-force optimum of a small instance");
  add_instance_flags(brute, &flags);
  std::string brute_out;
  brute->add_option("--out", brute_out, "result JSON output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (serial) subopt::set_parallel_enabled(false);
  if (threads > 0) subopt::set_thread_cap(threads);

  try {
    if (gen->parsed()) {
      const subopt::InstanceSpec spec = resolve_instance(flags);
      subopt::generate_instance(spec);  // validate before writing
      write_or_print(gen_out, subopt::instance_spec_to_json(spec).dump(2) + "\n");
      return 0;
    }

    if (run->parsed()) {
      subopt::BenchCell cell;
      cell.instance = resolve_instance(flags);
      cell.algorithm = algo;
      cell.budget = budget;
      json params = json::object();
      if (!preset.empty()) params["preset"] = preset;
      params["epsilon"] = epsilon;
      if (m_opt) params["m"] = *m_opt;
      if (phi1_opt) params["phi1"] = *phi1_opt;
      if (phi2_opt) params["phi2"] = *phi2_opt;
      if (p_opt) params["p"] = *p_opt;
      if (iterations_opt) params["iterations"] = *iterations_opt;
      if (probability_opt) params["probability"] = *probability_opt;
      cell.algo_params = params;

      const subopt::SingleRun result =
          subopt::run_single(cell, seed, true, !trace_path.empty());
      json out = subopt::to_jsonl(result.record);
      out["solution"] = solution_json(result.solution);
      write_or_print(run_out, out.dump(2) + "\n");
      if (!trace_path.empty())
        write_or_print(trace_path, subopt::trace_to_jsonl(result.trace));
      return 0;
    }

    if (bench->parsed()) {
      std::vector<subopt::BenchCell> plan;
      if (!plan_path.empty()) {
        std::ifstream in(plan_path);
        if (!in) throw std::invalid_argument("config error: cannot open plan " + plan_path);
        json j;
        in >> j;
        plan = subopt::plan_from_json(j);
      } else {
        subopt::BenchCell cell;
        cell.instance = resolve_instance(flags);
        cell.algorithm = bench_algo;
        json params = json::object();
        if (!bench_preset.empty()) params["preset"] = bench_preset;
        params["epsilon"] = bench_epsilon;
        if (bench_m) params["m"] = *bench_m;
        if (bench_phi1) params["phi1"] = *bench_phi1;
        if (bench_phi2) params["phi2"] = *bench_phi2;
        if (bench_p) params["p"] = *bench_p;
        cell.algo_params = params;
        cell.budget = bench_budget;
        for (long long t = 0; t < trials; ++t)
          cell.seeds.push_back(bench_seed + static_cast<std::uint64_t>(t));
        plan.push_back(std::move(cell));
      }

      subopt::BenchOptions options;
      options.measure_wall_time = !no_wall_time;
      const subopt::BenchOutcome outcome = subopt::run_bench(plan, options);

      std::string csv = subopt::bench_csv_header() + "\n";
      std::string jsonl;
      for (const subopt::BenchRecord& r : outcome.records) {
        csv += subopt::to_csv_line(r) + "\n";
        jsonl += subopt::to_jsonl(r).dump() + "\n";
      }
      if (bench_out.empty() || bench_out == "-") {
        std::cout << csv;
      } else {
        write_or_print(bench_out + ".csv", csv);
        write_or_print(bench_out + ".jsonl", jsonl);
      }
      for (const std::string& failure : outcome.failures)
        std::cerr << "cell failed: " << failure << "\n";
      return outcome.failures.empty() ? 0 : 2;
    }

    if (brute->parsed()) {
      const subopt::Instance instance = generate_instance(resolve_instance(flags));
      const subopt::BruteForceResult result = subopt::brute_force_opt(
          *instance.oracle, *instance.system, subopt::SolutionSet::full(instance.oracle->ground()));
      json out{{"instance", instance.name},
               {"opt_value", result.opt_value},
               {"opt_set", solution_json(result.opt_set)},
               {"feasible_count", result.feasible_count}};
      write_or_print(brute_out, out.dump(2) + "\n");
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
