#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "disruption/graph.hpp"
#include "disruption/metrics.hpp"
#include "disruption/rewiring.hpp"
#include "disruption/unipartite.hpp"

namespace disruption {

struct IngestReport {
  std::size_t rows = 0;
  std::size_t compressed_duplicates = 0;  // rows merged into an earlier (user, community) pair
  std::size_t users = 0;
  std::size_t communities = 0;
  std::size_t edges = 0;
  Weight total_weight = 0;
};

struct IngestResult {
  BipartiteGraph graph;
  IngestReport report;
};

/// CSV with header `user,community[,weight]`. Blank lines are skipped and
/// fields may be double-quoted. Errors name `source` and the 1-based line.
IngestResult read_edge_list(std::istream& in, const std::string& source = "<stream>");
IngestResult ingest_edge_list(const std::filesystem::path& path);

/// CSV with header `source,target[,weight]`.
UnipartiteGraph read_unipartite_edge_list(std::istream& in, const std::string& source = "<stream>");
UnipartiteGraph ingest_unipartite_edge_list(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const BipartiteGraph& g);

enum class OutputFormat { Csv, Json };
const char* to_string(OutputFormat f) noexcept;
OutputFormat parse_output_format(const std::string& text);

/// 12 significant digits, shortest form ("%.12g").
std::string format_number(double value);
/// value rounded to what format_number prints.
double round_to_output(double value);

/// k,fraction_removed,disruption
void write_curve_csv(std::ostream& out, const DisruptionCurve& curve);
std::string curve_to_json(const DisruptionCurve& curve);

/// Long format: target_fraction,metric,value. An empty trace gives the header only.
void write_trace_csv(std::ostream& out, const RewiringTrace& trace);
std::string trace_to_json(const RewiringTrace& trace);

/// Relative paths are placed under $DISRUPTION_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output_path(const std::filesystem::path& path);

/// Writes the whole content, creating parent directories. Throws Io naming the path.
void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace disruption
