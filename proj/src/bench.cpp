#include "subopt/bench.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "subopt/baselines.hpp"
#include "subopt/exhaustive.hpp"
#include "subopt/parallel.hpp"

namespace subopt {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <class T>
T param_or(const json& j, const std::string& key, T fallback) {
  if (j.is_object() && j.contains(key)) return j.at(key).get<T>();
  return fallback;
}

// Best feasible solution seen so far among all evaluated sets, plus the
// query-budget guard. Feasibility lookups here are reporting machinery, not
// algorithm cost, so they stay off the ledger.
class BudgetTracker : public BatchObserver {
 public:
  BudgetTracker(const SubmodularOracle& oracle, const IndependenceSystem& system,
                long long budget)
      : system_(system), budget_(budget), best_set_(oracle.ground()) {
    best_value_ = oracle.empty_value();
  }

  void on_value(const SolutionSet& s, double value) override {
    // Only evaluations inside the budget count as "seen".
    if (observed_++ >= budget_) return;
    if (value > best_value_ && system_.feasible(s)) {
      best_value_ = value;
      best_set_ = s;
    }
  }

  bool budget_exceeded(const RunLedger& ledger) const override {
    return ledger.value_queries >= budget_;
  }

  double best_value() const { return best_value_; }
  const SolutionSet& best_set() const { return best_set_; }

 private:
  const IndependenceSystem& system_;
  long long budget_;
  long long observed_ = 0;
  double best_value_;
  SolutionSet best_set_;
};

std::string params_string(const std::string& algorithm, const json& params,
                          const SamplingParams& sampling, int p, long long budget) {
  std::ostringstream out;
  if (algorithm == "rep-sampling") {
    out << "eps=" << format_double(sampling.epsilon) << ";m=" << sampling.m
        << ";phi1=" << format_double(sampling.phi1) << ";phi2=" << format_double(sampling.phi2)
        << ";lambda=" << format_double(sampling.lambda) << ";p=" << p;
  } else if (algorithm == "repeated-greedy") {
    out << "iterations=" << param_or<int>(params, "iterations", 0);
  } else if (algorithm == "sample-greedy") {
    out << "probability=" << format_double(param_or<double>(params, "probability", 0.0));
  } else {
    out << "-";
  }
  if (budget >= 0) out << ";budget=" << budget;
  return out.str();
}

SamplingParams sampling_params_for(const json& params, int p, std::uint64_t seed) {
  const std::string preset = param_or<std::string>(params, "preset", "");
  SamplingParams sp;
  if (preset == "p-system") {
    sp = preset_p_system(p, param_or<double>(params, "epsilon", 0.1), seed);
  } else if (preset == "p-extendible") {
    sp = preset_p_extendible(p, param_or<double>(params, "epsilon", 0.1), seed);
  } else if (preset.empty()) {
    sp.epsilon = param_or<double>(params, "epsilon", 0.1);
    sp.m = param_or<int>(params, "m", 1);
    sp.phi1 = param_or<double>(params, "phi1", 1.0);
    sp.phi2 = param_or<double>(params, "phi2", 1.0);
    sp.seed = seed;
    sp.lambda = derive_lambda(sp.epsilon, p, sp.m);
    sp.validate();
  } else {
    throw std::invalid_argument("config error at algo_params.preset: unknown preset " + preset);
  }
  // Overridable knobs on top of a preset.
  if (params.is_object() && params.contains("m") && !preset.empty())
    sp.m = params.at("m").get<int>();
  if (params.is_object() && params.contains("phi1") && !preset.empty())
    sp.phi1 = params.at("phi1").get<double>();
  if (params.is_object() && params.contains("phi2") && !preset.empty())
    sp.phi2 = params.at("phi2").get<double>();
  sp.lambda = derive_lambda(sp.epsilon, p, sp.m);
  sp.validate();
  return sp;
}

}  // namespace

SingleRun run_single(const BenchCell& cell, std::uint64_t seed, bool measure_wall_time,
                     bool want_trace) {
  const Instance instance = generate_instance(cell.instance);
  const SubmodularOracle& oracle = *instance.oracle;
  const IndependenceSystem& system = *instance.system;
  const int p = param_or<int>(cell.algo_params, "p", system.p());

  RunLedger ledger;
  SingleRun out{BenchRecord{}, SolutionSet(oracle.ground()), {}};
  SamplingParams sampling;
  std::optional<BudgetTracker> tracker;
  if (cell.budget >= 0) tracker.emplace(oracle, system, cell.budget);
  BatchObserver* observer = tracker ? &*tracker : nullptr;

  const auto started = std::chrono::steady_clock::now();
  bool truncated = false;
  double value = 0.0;
  try {
    if (cell.algorithm == "rep-sampling") {
      sampling = sampling_params_for(cell.algo_params, p, seed);
      RunResult result = rep_sampling(oracle, system, sampling, ledger, p,
                                      want_trace ? &out.trace : nullptr, observer);
      out.solution = result.solution;
      value = result.value;
    } else if (cell.algorithm == "greedy") {
      out.solution = greedy(oracle, system, SolutionSet::full(oracle.ground()), ledger, nullptr,
                            observer);
      const SolutionSet finals[] = {out.solution};
      value = value_batch(oracle, finals, ledger, observer)[0];
    } else if (cell.algorithm == "repeated-greedy") {
      const int iterations =
          param_or<int>(cell.algo_params, "iterations", default_repeated_greedy_iterations(p));
      out.solution = repeated_greedy(oracle, system, iterations, ledger, observer);
      const SolutionSet finals[] = {out.solution};
      value = value_batch(oracle, finals, ledger, observer)[0];
    } else if (cell.algorithm == "sample-greedy") {
      const double probability =
          param_or<double>(cell.algo_params, "probability", default_sample_probability(p));
      Rng rng(seed);
      out.solution = sample_greedy(oracle, system, probability, rng, ledger, observer);
      const SolutionSet finals[] = {out.solution};
      value = value_batch(oracle, finals, ledger, observer)[0];
    } else {
      throw std::invalid_argument("config error at algorithm: unknown algorithm " +
                                  cell.algorithm);
    }
  } catch (const BudgetExhausted&) {
    truncated = true;
  }
  const auto finished = std::chrono::steady_clock::now();

  if (truncated) {
    out.solution = tracker->best_set();
    value = tracker->best_value();
  }

  out.record.instance_id = instance.name;
  out.record.algorithm = cell.algorithm;
  out.record.params = params_string(cell.algorithm, cell.algo_params, sampling, p, cell.budget);
  out.record.seed = seed;
  out.record.value = value;
  out.record.value_queries = ledger.value_queries;
  out.record.value_rounds = ledger.value_rounds;
  out.record.indep_queries = ledger.indep_queries;
  out.record.indep_rounds = ledger.indep_rounds;
  out.record.wall_time_ms =
      measure_wall_time
          ? std::chrono::duration<double, std::milli>(finished - started).count()
          : 0.0;
  return out;
}

BenchOutcome run_bench(const std::vector<BenchCell>& plan, const BenchOptions& options) {
  if (plan.empty()) throw std::invalid_argument("config error at plan: empty plan");

  struct Task {
    const BenchCell* cell;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const BenchCell& cell : plan) {
    if (cell.seeds.empty()) throw std::invalid_argument("config error at plan: cell without seeds");
    for (std::uint64_t seed : cell.seeds) tasks.push_back({&cell, seed});
  }

  std::vector<BenchRecord> records(tasks.size());
  std::vector<std::string> errors(tasks.size());
  auto body = [&](std::int64_t i) {
    const Task& task = tasks[static_cast<std::size_t>(i)];
    try {
      records[static_cast<std::size_t>(i)] =
          run_single(*task.cell, task.seed, options.measure_wall_time, false).record;
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(i)] =
          task.cell->instance.name + "/" + task.cell->algorithm + "/seed " +
          std::to_string(task.seed) + ": " + ex.what();
    }
  };
  if (options.parallel_cells)
    parallel_for(static_cast<std::int64_t>(tasks.size()), body);
  else
    serial_for(static_cast<std::int64_t>(tasks.size()), body);

  BenchOutcome outcome;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i].empty())
      outcome.failures.push_back(errors[i]);
    else
      outcome.records.push_back(records[i]);
  }
  return outcome;
}

std::string bench_csv_header() {
  return "instance,algorithm,params,seed,value,value_queries,value_rounds,indep_queries,"
         "indep_rounds,wall_time_ms";
}

std::string to_csv_line(const BenchRecord& r) {
  std::ostringstream out;
  out << r.instance_id << ',' << r.algorithm << ',' << r.params << ',' << r.seed << ','
      << format_double(r.value) << ',' << r.value_queries << ',' << r.value_rounds << ','
      << r.indep_queries << ',' << r.indep_rounds << ',' << format_double(r.wall_time_ms);
  return out.str();
}

BenchRecord from_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (fields.size() != 10) throw std::invalid_argument("bench CSV line must have 10 fields");
  BenchRecord r;
  r.instance_id = fields[0];
  r.algorithm = fields[1];
  r.params = fields[2];
  r.seed = std::stoull(fields[3]);
  r.value = std::stod(fields[4]);
  r.value_queries = std::stoll(fields[5]);
  r.value_rounds = std::stoll(fields[6]);
  r.indep_queries = std::stoll(fields[7]);
  r.indep_rounds = std::stoll(fields[8]);
  r.wall_time_ms = std::stod(fields[9]);
  return r;
}

json to_jsonl(const BenchRecord& r) {
  return json{{"schema_version", 1},
              {"instance", r.instance_id},
              {"algorithm", r.algorithm},
              {"params", r.params},
              {"seed", r.seed},
              {"value", r.value},
              {"value_queries", r.value_queries},
              {"value_rounds", r.value_rounds},
              {"indep_queries", r.indep_queries},
              {"indep_rounds", r.indep_rounds},
              {"wall_time_ms", r.wall_time_ms}};
}

BenchRecord from_jsonl(const json& j) {
  BenchRecord r;
  r.instance_id = j.at("instance").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.params = j.at("params").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.value = j.at("value").get<double>();
  r.value_queries = j.at("value_queries").get<long long>();
  r.value_rounds = j.at("value_rounds").get<long long>();
  r.indep_queries = j.at("indep_queries").get<long long>();
  r.indep_rounds = j.at("indep_rounds").get<long long>();
  r.wall_time_ms = j.at("wall_time_ms").get<double>();
  return r;
}

std::string trace_to_jsonl(const TraceSink& trace) {
  std::ostringstream out;
  for (const TraceEvent& ev : trace) {
    json j{{"schema_version", 1},
           {"record", ev.kind == TraceEvent::Kind::Level ? "level" : "inner"},
           {"iteration", ev.iteration},
           {"level", ev.level},
           {"delta", ev.delta},
           {"x_size", ev.x_size},
           {"s_size_before", ev.s_size_before},
           {"ledger",
            json{{"value_queries", ev.ledger.value_queries},
                 {"value_rounds", ev.ledger.value_rounds},
                 {"indep_queries", ev.ledger.indep_queries},
                 {"indep_rounds", ev.ledger.indep_rounds}}}};
    if (ev.kind == TraceEvent::Kind::Inner) {
      j["inner"] = ev.inner;
      j["eta"] = ev.eta;
      j["a_size"] = ev.a_size;
      j["admitted"] = ev.admitted;
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

std::vector<BenchCell> plan_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("config error at plan: expected a JSON array");
  std::vector<BenchCell> plan;
  int index = 0;
  for (const json& cell_json : j) {
    BenchCell cell;
    if (!cell_json.contains("instance"))
      throw std::invalid_argument("config error at plan[" + std::to_string(index) +
                                  "].instance: missing");
    cell.instance = instance_spec_from_json(cell_json.at("instance"));
    cell.algorithm = cell_json.at("algorithm").get<std::string>();
    cell.algo_params = cell_json.contains("params") ? cell_json.at("params") : json::object();
    if (cell_json.contains("seeds"))
      cell.seeds = cell_json.at("seeds").get<std::vector<std::uint64_t>>();
    cell.budget = param_or<long long>(cell_json, "budget", -1);
    plan.push_back(std::move(cell));
    ++index;
  }
  return plan;
}

json plan_to_json(const std::vector<BenchCell>& plan) {
  json out = json::array();
  for (const BenchCell& cell : plan) {
    json c;
    c["instance"] = instance_spec_to_json(cell.instance);
    c["algorithm"] = cell.algorithm;
    c["params"] = cell.algo_params;
    c["seeds"] = cell.seeds;
    if (cell.budget >= 0) c["budget"] = cell.budget;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace subopt
