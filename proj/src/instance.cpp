#include "subopt/instance.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "subopt/constraints.hpp"
#include "subopt/rng.hpp"

namespace subopt {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
  throw std::invalid_argument("config error at " + field + ": " + message);
}

template <class T>
T field_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

Eigen::MatrixXd matrix_from_json(const json& rows, const std::string& field, int n) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    config_error(field, "expected an n x n array of rows");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = rows.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      config_error(field, "row " + std::to_string(i) + " has the wrong length");
    for (int j2 = 0; j2 < n; ++j2) m(i, j2) = row.at(static_cast<std::size_t>(j2)).get<double>();
  }
  return m;
}

// Gram matrix of random feature columns: G^T G / d + I. Eigenvalues of every
// principal submatrix are at least 1, so log-determinants stay non-negative.
Eigen::MatrixXd random_psd_kernel(int n, int features, Rng& rng) {
  Eigen::MatrixXd g(features, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < features; ++r) g(r, c) = rng.next_gaussian();
  Eigen::MatrixXd kernel = (g.transpose() * g) / static_cast<double>(features);
  kernel += Eigen::MatrixXd::Identity(n, n);
  return kernel;
}

// Covariance with variance `scale` on the diagonal and tightly correlated
// station pairs, built as a Gram matrix of unit feature columns.
Eigen::MatrixXd correlated_covariance(int n, int features, int pairs, double rho, double scale,
                                      Rng& rng) {
  Eigen::MatrixXd z(features, n);
  for (int c = 0; c < n; ++c) {
    Eigen::VectorXd col(features);
    for (int r = 0; r < features; ++r) col(r) = rng.next_gaussian();
    z.col(c) = col.normalized();
  }
  for (int pair = 0; pair < pairs && 2 * pair + 1 < n; ++pair) {
    const int a = 2 * pair, b = 2 * pair + 1;
    Eigen::VectorXd noise = z.col(b) - z.col(a) * z.col(a).dot(z.col(b));
    if (noise.norm() < 1e-12) continue;
    z.col(b) = (rho * z.col(a) + std::sqrt(1.0 - rho * rho) * noise.normalized()).normalized();
  }
  return scale * (z.transpose() * z);
}

std::shared_ptr<SubmodularOracle> build_objective(const InstanceSpec& spec) {
  const json& obj = spec.objective;
  const auto kind = field_or<std::string>(obj, "kind", "");
  const int n = spec.n;
  Rng rng = Rng(spec.seed).substream(0x0B1EC7);

  if (kind == "modular") {
    const int max_weight = field_or<int>(obj, "max_weight", 10);
    if (max_weight < 1) config_error("objective.max_weight", "must be >= 1");
    std::vector<double> weights(static_cast<std::size_t>(n));
    for (double& w : weights)
      w = static_cast<double>(1 + rng.next_below(static_cast<std::uint64_t>(max_weight)));
    return std::make_shared<ModularObjective>(std::move(weights));
  }
  if (kind == "coverage") {
    // Universe = one unique point per element plus a shared pool.
    const int shared = field_or<int>(obj, "shared_universe", std::max(1, n / 4));
    const int per_element = field_or<int>(obj, "shared_per_element", 3);
    const double unique_weight = field_or<double>(obj, "unique_weight", 1.0);
    const double shared_weight = field_or<double>(obj, "shared_weight", 1.0);
    if (shared < 1) config_error("objective.shared_universe", "must be >= 1");
    if (per_element < 0) config_error("objective.shared_per_element", "must be >= 0");
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
      sets[static_cast<std::size_t>(e)].push_back(e);
      for (int i = 0; i < per_element; ++i)
        sets[static_cast<std::size_t>(e)].push_back(
            n + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(shared))));
    }
    std::vector<double> weights(static_cast<std::size_t>(n + shared), shared_weight);
    for (int i = 0; i < n; ++i) weights[static_cast<std::size_t>(i)] = unique_weight;
    return std::make_shared<CoverageObjective>(
        CoverageInstance(std::move(sets), std::move(weights)));
  }
  if (kind == "cut") {
    const double edge_prob = field_or<double>(obj, "edge_prob", 0.4);
    const int max_weight = field_or<int>(obj, "max_weight", 4);
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
      config_error("objective.edge_prob", "must lie in [0, 1]");
    std::vector<CutGraph::Edge> edges;
    for (ElementId u = 0; u < n; ++u)
      for (ElementId v = u + 1; v < n; ++v)
        if (rng.next_bernoulli(edge_prob))
          edges.push_back({u, v,
                           static_cast<double>(
                               1 + rng.next_below(static_cast<std::uint64_t>(max_weight)))});
    return std::make_shared<CutObjective>(CutGraph(n, std::move(edges)));
  }
  if (kind == "logdet") {
    const double shift = field_or<double>(obj, "shift", 0.0);
    if (obj.contains("kernel"))
      return std::make_shared<LogDetObjective>(
          KernelMatrix(matrix_from_json(obj.at("kernel"), "objective.kernel", n)), shift);
    const int features = field_or<int>(obj, "features", std::max(2, n / 2));
    if (features < 1) config_error("objective.features", "must be >= 1");
    return std::make_shared<LogDetObjective>(KernelMatrix(random_psd_kernel(n, features, rng)),
                                             shift);
  }
  if (kind == "entropy") {
    if (obj.contains("cov"))
      return std::make_shared<EntropyObjective>(
          CovarianceMatrix(matrix_from_json(obj.at("cov"), "objective.cov", n)));
    if (obj.contains("stations_csv")) {
      StationData data = ingest_stations(obj.at("stations_csv").get<std::string>());
      if (static_cast<int>(data.station_ids.size()) != n)
        config_error("objective.stations_csv", "station count does not match n");
      return std::make_shared<EntropyObjective>(std::move(data.covariance));
    }
    const int features = field_or<int>(obj, "features", std::max(4, 2 * n));
    const int pairs = field_or<int>(obj, "correlated_pairs", n / 4);
    const double rho = field_or<double>(obj, "rho", 0.999);
    const double variance = field_or<double>(obj, "variance", 10.0);
    if (!(rho >= 0.0 && rho < 1.0)) config_error("objective.rho", "must lie in [0, 1)");
    if (!(variance > 0.0)) config_error("objective.variance", "must be positive");
    return std::make_shared<EntropyObjective>(
        CovarianceMatrix(correlated_covariance(n, features, pairs, rho, variance, rng)));
  }
  config_error("objective.kind", "unknown objective kind '" + kind + "'");
}

std::shared_ptr<IndependenceSystem> build_constraint(const json& spec, int n, Rng rng,
                                                     const std::string& field) {
  const auto kind = field_or<std::string>(spec, "kind", "");
  const GroundSet ground{n};

  if (kind == "uniform") {
    const int k = field_or<int>(spec, "k", std::max(1, n / 4));
    return std::make_shared<UniformMatroid>(ground, k);
  }
  if (kind == "partition") {
    if (spec.contains("stations_csv")) {
      StationData data = ingest_stations(spec.at("stations_csv").get<std::string>());
      if (static_cast<int>(data.groups.size()) != n)
        config_error(field + ".stations_csv", "station count does not match n");
      return partition_from_labels(data.groups, field_or<int>(spec, "cap", 1));
    }
    if (spec.contains("blocks")) {
      std::vector<std::vector<ElementId>> blocks;
      for (const json& row : spec.at("blocks")) blocks.push_back(row.get<std::vector<ElementId>>());
      auto caps = spec.at("caps").get<std::vector<int>>();
      return std::make_shared<PartitionMatroid>(ground, std::move(blocks), std::move(caps));
    }
    const int num_blocks = field_or<int>(spec, "num_blocks", 2);
    const int cap = field_or<int>(spec, "cap", 1);
    if (num_blocks < 1) config_error(field + ".num_blocks", "must be >= 1");
    std::vector<ElementId> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<std::vector<ElementId>> blocks(static_cast<std::size_t>(num_blocks));
    for (int i = 0; i < n; ++i)
      blocks[static_cast<std::size_t>(i % num_blocks)].push_back(order[static_cast<std::size_t>(i)]);
    return std::make_shared<PartitionMatroid>(ground, std::move(blocks),
                                              std::vector<int>(static_cast<std::size_t>(num_blocks),
                                                               cap));
  }
  if (kind == "intersection") {
    if (!spec.contains("members") || !spec.at("members").is_array() || spec.at("members").empty())
      config_error(field + ".members", "expected a non-empty array of matroid specs");
    std::vector<std::shared_ptr<const IndependenceSystem>> members;
    int index = 0;
    for (const json& member : spec.at("members")) {
      const auto member_kind = field_or<std::string>(member, "kind", "");
      if (member_kind != "uniform" && member_kind != "partition")
        config_error(field + ".members[" + std::to_string(index) + "].kind",
                     "intersection members must be matroids (uniform or partition)");
      members.push_back(build_constraint(member, n, rng.substream(0xC0 + index),
                                         field + ".members[" + std::to_string(index) + "]"));
      ++index;
    }
    return std::make_shared<MatroidIntersection>(std::move(members));
  }
  if (kind == "groupcap") {
    if (spec.contains("groups")) {
      std::vector<std::vector<ElementId>> groups;
      for (const json& row : spec.at("groups")) groups.push_back(row.get<std::vector<ElementId>>());
      auto caps = spec.at("caps").get<std::vector<int>>();
      return std::make_shared<GroupCapSystem>(ground, std::move(groups), std::move(caps));
    }
    const int num_groups = field_or<int>(spec, "num_groups", 3);
    const int group_size = field_or<int>(spec, "group_size", std::max(2, n / 2));
    const int cap = field_or<int>(spec, "cap", 1);
    if (num_groups < 1) config_error(field + ".num_groups", "must be >= 1");
    if (group_size < 1 || group_size > n) config_error(field + ".group_size", "must be in [1, n]");
    std::vector<std::vector<ElementId>> groups;
    for (int g = 0; g < num_groups; ++g) {
      std::vector<ElementId> order(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      rng.shuffle(order);
      groups.emplace_back(order.begin(), order.begin() + group_size);
    }
    return std::make_shared<GroupCapSystem>(ground, std::move(groups),
                                            std::vector<int>(static_cast<std::size_t>(num_groups),
                                                             cap));
  }
  config_error(field + ".kind", "unknown constraint kind '" + kind + "'");
}

}  // namespace

Instance generate_instance(const InstanceSpec& spec) {
  if (spec.n < 0) config_error("n", "must be non-negative");
  Instance out;
  out.oracle = build_objective(spec);
  out.system = build_constraint(spec.constraint, spec.n, Rng(spec.seed).substream(0xC0157),
                                "constraint");
  out.name = spec.name;
  if (out.name.empty()) {
    out.name = field_or<std::string>(spec.objective, "kind", "?") + "-" +
               field_or<std::string>(spec.constraint, "kind", "?") + "-n" +
               std::to_string(spec.n) + "-s" + std::to_string(spec.seed);
  }
  return out;
}

InstanceSpec instance_spec_from_json(const json& j) {
  InstanceSpec spec;
  spec.name = field_or<std::string>(j, "name", "");
  if (!j.contains("n")) config_error("n", "missing");
  spec.n = j.at("n").get<int>();
  spec.seed = field_or<std::uint64_t>(j, "seed", 0);
  if (!j.contains("objective")) config_error("objective", "missing");
  if (!j.contains("constraint")) config_error("constraint", "missing");
  spec.objective = j.at("objective");
  spec.constraint = j.at("constraint");
  return spec;
}

json instance_spec_to_json(const InstanceSpec& spec) {
  json j;
  j["schema_version"] = 1;
  if (!spec.name.empty()) j["name"] = spec.name;
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["objective"] = spec.objective;
  j["constraint"] = spec.constraint;
  return j;
}

InstanceSpec load_instance_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config error: cannot open instance file " + path);
  json j;
  in >> j;
  return instance_spec_from_json(j);
}

// --- Station CSV ingestion ---------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

StationData ingest_stations_text(const std::string& csv_text) {
  std::stringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("station ingestion error: empty input");
  const auto header = split_csv_line(line);
  if (header.size() < 6 || header[0] != "station_id" || header[1] != "group")
    throw std::invalid_argument(
        "station ingestion error: header must be station_id,group,lat,lon,v1,...,vT with T >= 2");
  const std::size_t series_len = header.size() - 4;

  StationData data{CovarianceMatrix(Eigen::MatrixXd()), {}, {}};
  std::vector<std::vector<double>> series;
  int row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::invalid_argument("station ingestion error: row " + std::to_string(row_number) +
                                  " has " + std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    const std::string& id = fields[0];
    for (const std::string& existing : data.station_ids)
      if (existing == id)
        throw std::invalid_argument("station ingestion error: row " +
                                    std::to_string(row_number) + " duplicates station id " + id);
    std::vector<double> values(series_len);
    for (std::size_t i = 0; i < series_len; ++i) {
      try {
        std::size_t consumed = 0;
        values[i] = std::stod(fields[4 + i], &consumed);
        if (consumed != fields[4 + i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument("station ingestion error: row " + std::to_string(row_number) +
                                    " has a non-numeric value in column " +
                                    std::to_string(5 + i));
      }
    }
    data.station_ids.push_back(id);
    data.groups.push_back(fields[1]);
    series.push_back(std::move(values));
  }
  if (series.empty())
    throw std::invalid_argument("station ingestion error: no station rows");

  // Month-over-month variation series, then its sample covariance.
  const std::size_t n = series.size();
  const std::size_t diffs = series_len - 1;
  Eigen::MatrixXd variation(static_cast<Eigen::Index>(diffs), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < diffs; ++t)
      variation(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) =
          series[s][t + 1] - series[s][t];
  const Eigen::RowVectorXd means = variation.colwise().mean();
  variation.rowwise() -= means;
  const double denom = diffs > 1 ? static_cast<double>(diffs - 1) : 1.0;
  Eigen::MatrixXd cov = (variation.transpose() * variation) / denom;
  data.covariance = CovarianceMatrix(std::move(cov));
  return data;
}

StationData ingest_stations(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in)
    throw std::invalid_argument("station ingestion error: cannot open " + csv_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ingest_stations_text(buffer.str());
}

std::shared_ptr<PartitionMatroid> partition_from_labels(const std::vector<std::string>& labels,
                                                        int cap_per_group) {
  std::vector<std::string> distinct;
  std::vector<std::vector<ElementId>> blocks;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::size_t slot = distinct.size();
    for (std::size_t d = 0; d < distinct.size(); ++d)
      if (distinct[d] == labels[i]) {
        slot = d;
        break;
      }
    if (slot == distinct.size()) {
      distinct.push_back(labels[i]);
      blocks.emplace_back();
    }
    blocks[slot].push_back(static_cast<ElementId>(i));
  }
  return std::make_shared<PartitionMatroid>(GroundSet{static_cast<ElementId>(labels.size())},
                                            std::move(blocks),
                                            std::vector<int>(blocks.size(), cap_per_group));
}

}  // namespace subopt
