#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "disruption/generators.hpp"
#include "disruption/graph.hpp"
#include "disruption/io.hpp"
#include "disruption/rewiring.hpp"

namespace disruption {

const char* tool_version() noexcept;

enum class Metric { Disruption, Dauc, Population, Giant, LocalCheeger, Lambda2 };
const char* to_string(Metric m) noexcept;
Metric parse_metric(const std::string& text);

struct RewiringSettings {
  RewireDirection direction = RewireDirection::Increase;
  std::vector<double> fractions;
};

struct ExperimentConfig {
  // exactly one of these
  std::optional<std::string> edge_list;
  std::optional<GeneratorSpec> generator;

  std::vector<Metric> metrics{Metric::Disruption, Metric::Dauc};
  RankingKey rank_by = RankingKey::UniqueUsers;
  bool weighted = true;
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  std::optional<RewiringSettings> rewiring;
  std::string output;
  OutputFormat format = OutputFormat::Json;

  void validate() const;
};

/// Strict parser: unknown keys, a missing input or both inputs are errors.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

/// Per-step mean with a normal 95% interval across replicates.
struct SeriesSummary {
  std::string name;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct ScalarSummary {
  std::string name;
  std::vector<double> values;  // one per run, in seed order
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Throws Aggregation when replicates differ in length.
SeriesSummary summarize_series(std::string name, std::vector<double> x,
                               const std::vector<std::vector<double>>& replicates);
ScalarSummary summarize_scalar(std::string name, std::vector<double> values);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::uint64_t> seeds;
  std::optional<IngestReport> ingest;
  std::vector<SeriesSummary> series;
  std::vector<ScalarSummary> scalars;
  std::vector<RewiringTrace> traces;  // one per run when rewiring is configured

  const SeriesSummary* find_series(const std::string& name) const;
  const ScalarSummary* find_scalar(const std::string& name) const;
};

/// Generator inputs run `runs` replicates with seeds derive_seed(seed, i);
/// an edge-list input is a single run. Replicates run concurrently.
ExperimentReport run_experiment(const ExperimentConfig& config);

std::string report_to_json(const ExperimentReport& report);
/// Long format: metric,index,x,mean,ci_lower,ci_upper (scalars leave index and x empty).
std::string report_to_csv(const ExperimentReport& report);

}  // namespace disruption
