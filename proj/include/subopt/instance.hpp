#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subopt/constraints.hpp"
#include "subopt/objectives.hpp"
#include "subopt/oracles.hpp"

namespace subopt {

// Declarative instance description: objective and constraint kinds plus their
// parameters. Everything downstream is a pure function of (spec, seed).
struct InstanceSpec {
  std::string name;
  int n = 0;
  std::uint64_t seed = 0;
  nlohmann::json objective;   // {"kind": "modular"|"coverage"|"cut"|"logdet"|"entropy", ...}
  nlohmann::json constraint;  // {"kind": "uniform"|"partition"|"intersection"|"groupcap", ...}
};

struct Instance {
  std::shared_ptr<SubmodularOracle> oracle;
  std::shared_ptr<IndependenceSystem> system;
  std::string name;
};

// Materializes the oracle and constraint; bit-for-bit reproducible from the
// spec. Throws std::invalid_argument naming the offending field on bad specs.
Instance generate_instance(const InstanceSpec& spec);

InstanceSpec instance_spec_from_json(const nlohmann::json& j);
nlohmann::json instance_spec_to_json(const InstanceSpec& spec);
InstanceSpec load_instance_spec(const std::string& path);

// Ingests the station CSV (header: station_id,group,lat,lon,v1,...,vT),
// builds the covariance of the month-over-month variation series with a
// diagonal ridge, and returns the per-station group labels.
struct StationData {
  CovarianceMatrix covariance;
  std::vector<std::string> station_ids;
  std::vector<std::string> groups;
};
StationData ingest_stations(const std::string& csv_path);
StationData ingest_stations_text(const std::string& csv_text);

// Partition matroid whose blocks are the distinct labels, capped uniformly.
std::shared_ptr<PartitionMatroid> partition_from_labels(const std::vector<std::string>& labels,
                                                        int cap_per_group);

}  // namespace subopt
