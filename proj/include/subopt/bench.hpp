#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subopt/instance.hpp"
#include "subopt/sampling.hpp"

namespace subopt {

// One cell of a benchmark plan: an instance, an algorithm with its
// parameters, and the seeds to run it under.
struct BenchCell {
  InstanceSpec instance;
  std::string algorithm;       // rep-sampling | greedy | repeated-greedy | sample-greedy
  nlohmann::json algo_params;  // preset/epsilon/m/phi1/phi2/p, iterations, probability
  std::vector<std::uint64_t> seeds;
  long long budget = -1;  // >= 0: truncate after that many value queries
};

struct BenchRecord {
  std::string instance_id;
  std::string algorithm;
  std::string params;  // compact key=value list, ';'-separated
  std::uint64_t seed = 0;
  double value = 0.0;
  long long value_queries = 0;
  long long value_rounds = 0;
  long long indep_queries = 0;
  long long indep_rounds = 0;
  double wall_time_ms = 0.0;

  bool operator==(const BenchRecord&) const = default;
};

struct BenchOptions {
  // Wall time is the one nondeterministic record field; disable it to get
  // byte-identical output streams for the same plan and seeds.
  bool measure_wall_time = true;
  bool parallel_cells = true;
};

struct BenchOutcome {
  std::vector<BenchRecord> records;
  std::vector<std::string> failures;  // one message per failed (cell, seed)
};

BenchOutcome run_bench(const std::vector<BenchCell>& plan, const BenchOptions& options = {});

// Runs one (instance, algorithm, seed) and also exposes the solution and an
// optional structured trace; run_bench is a loop over this.
struct SingleRun {
  BenchRecord record;
  SolutionSet solution;
  TraceSink trace;
};
SingleRun run_single(const BenchCell& cell, std::uint64_t seed, bool measure_wall_time,
                     bool want_trace);

std::string bench_csv_header();
std::string to_csv_line(const BenchRecord& r);
BenchRecord from_csv_line(const std::string& line);
nlohmann::json to_jsonl(const BenchRecord& r);
BenchRecord from_jsonl(const nlohmann::json& j);

std::string trace_to_jsonl(const TraceSink& trace);

// Plan helpers: a plan file is a JSON array of cells.
std::vector<BenchCell> plan_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const std::vector<BenchCell>& plan);

}  // namespace subopt
