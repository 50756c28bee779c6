#include "disruption/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace disruption {

namespace {

using json = nlohmann::json;

std::string lower_trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

// Splits one CSV line; supports "quoted, fields" with "" escapes.
bool split_csv(const std::string& line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(std::move(cur));
  return !quoted;
}

struct CsvTable {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
  bool has_weight = false;
};

CsvTable read_table(std::istream& in, const std::string& source, const char* first, const char* second) {
  const std::string expected = std::string(first) + "," + second + "[,weight]";
  CsvTable table;
  std::string line;
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (lower_trim(line).empty()) continue;
    if (!split_csv(line, fields)) {
      throw Error(ErrorCode::InvalidRecord, source + ":" + std::to_string(line_no) + ": unterminated quote");
    }
    if (!header) {
      std::vector<std::string> names;
      for (const auto& f : fields) names.push_back(lower_trim(f));
      const bool ok = (names.size() == 2 || (names.size() == 3 && names[2] == "weight")) && names[0] == first &&
                      names[1] == second;
      if (!ok) {
        throw Error(ErrorCode::Format,
                    source + ":" + std::to_string(line_no) + ": expected header '" + expected + "', got '" + line + "'");
      }
      table.has_weight = names.size() == 3;
      header = true;
      continue;
    }
    const std::size_t width = table.has_weight ? 3 : 2;
    if (fields.size() != width) {
      throw Error(ErrorCode::InvalidRecord, source + ":" + std::to_string(line_no) + ": expected " +
                                                std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(fields);
    table.lines.push_back(line_no);
  }
  if (in.bad()) throw Error(ErrorCode::Io, source + ": read failed");
  if (!header) throw Error(ErrorCode::Format, source + ": missing header '" + expected + "'");
  return table;
}

Weight parse_weight(const std::string& text, const std::string& source, std::size_t line_no) {
  const std::string t = lower_trim(text);
  Weight w = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), w);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::InvalidRecord,
                source + ":" + std::to_string(line_no) + ": weight '" + text + "' is not an integer");
  }
  if (w < 1) {
    throw Error(ErrorCode::InvalidRecord, source + ":" + std::to_string(line_no) + ": weight must be >= 1");
  }
  return w;
}

void require_id(const std::string& id, const char* what, const std::string& source, std::size_t line_no) {
  if (id.empty()) {
    throw Error(ErrorCode::InvalidRecord, source + ":" + std::to_string(line_no) + ": empty " + what + " id");
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

json number_or_null(const Assortativity& a) {
  return a.defined ? json(round_to_output(a.value)) : json(nullptr);
}

std::string value_or_empty(const Assortativity& a) { return a.defined ? format_number(a.value) : std::string(); }

}  // namespace

IngestResult read_edge_list(std::istream& in, const std::string& source) {
  const CsvTable table = read_table(in, source, "user", "community");
  std::vector<EdgeRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    EdgeRecord r{row[0], row[1], 1};
    require_id(r.user, "user", source, table.lines[i]);
    require_id(r.community, "community", source, table.lines[i]);
    if (table.has_weight) r.weight = parse_weight(row[2], source, table.lines[i]);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyGraph, source + ": no edges");
  IngestResult result;
  result.graph = build_graph(records);
  result.report.rows = records.size();
  result.report.edges = result.graph.num_edges();
  result.report.compressed_duplicates = records.size() - result.graph.num_edges();
  result.report.users = result.graph.num_users();
  result.report.communities = result.graph.num_communities();
  result.report.total_weight = result.graph.total_weight();
  return result;
}

IngestResult ingest_edge_list(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_edge_list(in, path.string());
}

UnipartiteGraph read_unipartite_edge_list(std::istream& in, const std::string& source) {
  const CsvTable table = read_table(in, source, "source", "target");
  std::vector<UnipartiteEdgeRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    UnipartiteEdgeRecord r{row[0], row[1], 1};
    require_id(r.source, "source", source, table.lines[i]);
    require_id(r.target, "target", source, table.lines[i]);
    if (r.source == r.target) {
      throw Error(ErrorCode::InvalidRecord, source + ":" + std::to_string(table.lines[i]) + ": self-loop");
    }
    if (table.has_weight) r.weight = parse_weight(row[2], source, table.lines[i]);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyGraph, source + ": no edges");
  return UnipartiteGraph::from_records(records);
}

UnipartiteGraph ingest_unipartite_edge_list(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_unipartite_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const BipartiteGraph& g) {
  out << "user,community,weight\n";
  for (const Edge& e : g.edges()) {
    out << csv_field(g.user_id(e.user)) << ',' << csv_field(g.community_id(e.community)) << ',' << e.weight << '\n';
  }
}

const char* to_string(OutputFormat f) noexcept { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown output format '" + text + "' (expected csv or json)");
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
  return buf;
}

double round_to_output(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

void write_curve_csv(std::ostream& out, const DisruptionCurve& curve) {
  out << "k,fraction_removed,disruption\n";
  for (const DisruptionStep& s : curve.steps) {
    out << s.k << ',' << format_number(s.fraction_removed) << ',' << format_number(s.disruption) << '\n';
  }
}

std::string curve_to_json(const DisruptionCurve& curve) {
  json steps = json::array();
  for (const DisruptionStep& s : curve.steps) {
    steps.push_back({{"k", s.k},
                     {"fraction_removed", round_to_output(s.fraction_removed)},
                     {"disruption", round_to_output(s.disruption)},
                     {"surviving_users", s.surviving_users},
                     {"cut_weight", s.cut_weight},
                     {"survivor_weight", s.survivor_weight}});
  }
  json doc = {{"weighted", curve.weighted}, {"steps", steps}};
  if (!curve.steps.empty()) doc["dauc"] = round_to_output(dauc(curve));
  return doc.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const RewiringTrace& trace) {
  out << "target_fraction,metric,value\n";
  for (const RewiringCheckpoint& c : trace.checkpoints) {
    const std::string f = format_number(c.target_fraction);
    out << f << ",accepted_swaps," << c.accepted_swaps << '\n';
    out << f << ",achieved_fraction," << format_number(c.achieved_fraction) << '\n';
    out << f << ",reached," << (c.reached ? 1 : 0) << '\n';
    out << f << ",user_community_assortativity," << value_or_empty(c.user_community) << '\n';
    out << f << ",projected_degree_assortativity," << value_or_empty(c.projected_degree) << '\n';
    out << f << ",projected_population_assortativity," << value_or_empty(c.projected_population) << '\n';
    out << f << ",dauc," << format_number(c.dauc) << '\n';
  }
}

std::string trace_to_json(const RewiringTrace& trace) {
  json points = json::array();
  for (const RewiringCheckpoint& c : trace.checkpoints) {
    points.push_back({{"target_fraction", round_to_output(c.target_fraction)},
                      {"accepted_swaps", c.accepted_swaps},
                      {"achieved_fraction", round_to_output(c.achieved_fraction)},
                      {"reached", c.reached},
                      {"user_community_assortativity", number_or_null(c.user_community)},
                      {"projected_degree_assortativity", number_or_null(c.projected_degree)},
                      {"projected_population_assortativity", number_or_null(c.projected_population)},
                      {"dauc", round_to_output(c.dauc)}});
  }
  json doc = {{"direction", to_string(trace.direction)},
              {"seed", trace.seed},
              {"complete", trace.complete()},
              {"checkpoints", points}};
  return doc.dump(2) + "\n";
}

std::filesystem::path resolve_output_path(const std::filesystem::path& path) {
  if (path.is_absolute()) return path;
  if (const char* dir = std::getenv("DISRUPTION_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / path;
  }
  return path;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to " + path.string() + " failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace disruption
