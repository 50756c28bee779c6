#include "disruption/experiment.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "disruption/metrics.hpp"
#include "disruption/parallel.hpp"
#include "disruption/random.hpp"
#include "disruption/spectral.hpp"

#ifndef DISRUPTION_VERSION
#define DISRUPTION_VERSION "0.0.0"
#endif

namespace disruption {

namespace {

using json = nlohmann::json;

constexpr double kZ95 = 1.96;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Format, "config: " + msg); }

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_error(std::string(where) + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) config_error(std::string("unknown key '") + key + "' in " + where);
  }
}

template <typename T>
T get(const json& obj, const char* key, const char* where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string(where) + "." + key + ": " + e.what());
  }
}

GeneratorSpec parse_generator(const json& j) {
  check_keys(j, "generator", {"topology", "communities", "users", "gamma", "p", "neighborhood", "edges_per_user"});
  GeneratorSpec spec;
  if (!j.contains("topology")) config_error("generator.topology is required");
  spec.topology = parse_topology(get<std::string>(j, "topology", "generator"));
  if (j.contains("communities")) spec.communities = get<std::size_t>(j, "communities", "generator");
  if (j.contains("users")) spec.users = get<std::size_t>(j, "users", "generator");
  if (j.contains("gamma")) spec.gamma = get<double>(j, "gamma", "generator");
  if (j.contains("p")) spec.p = get<double>(j, "p", "generator");
  if (j.contains("neighborhood")) spec.neighborhood = get<std::size_t>(j, "neighborhood", "generator");
  if (j.contains("edges_per_user")) spec.edges_per_user = get<std::size_t>(j, "edges_per_user", "generator");
  return spec;
}

json generator_to_json(const GeneratorSpec& s) {
  return {{"topology", to_string(s.topology)}, {"communities", s.communities}, {"users", s.users},
          {"gamma", s.gamma},                  {"p", s.p},                     {"neighborhood", s.neighborhood},
          {"edges_per_user", s.edges_per_user}};
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double half_width(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return kZ95 * sd / std::sqrt(static_cast<double>(v.size()));
}

json rounded(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(round_to_output(x));
  return out;
}

struct RunResult {
  IngestReport ingest;
  std::vector<std::vector<double>> series;  // parallel to config metrics that are series
  std::vector<std::vector<double>> series_x;
  std::vector<double> scalars;
  RewiringTrace trace;
};

bool is_series(Metric m) { return m != Metric::Dauc && m != Metric::Lambda2; }

// Generators drop communities that end up empty, so replicates can differ in
// length. Those are read as step functions of the x axis on the longest grid.
std::vector<double> resample_onto(const std::vector<double>& grid, const std::vector<double>& x,
                                  const std::vector<double>& y) {
  if (x == grid) return y;
  std::vector<double> out;
  out.reserve(grid.size());
  std::size_t j = 0;
  for (double g : grid) {
    while (j + 1 < x.size() && x[j] < g - 1e-12) ++j;
    out.push_back(y[j]);
  }
  return out;
}

RunResult run_once(const ExperimentConfig& config, const BipartiteGraph& g, std::uint64_t seed) {
  RunResult out;
  const RemovalPlan plan = removal_plan(g, config.rank_by);
  const double c = static_cast<double>(g.num_communities());
  std::optional<DisruptionCurve> curve;
  auto disruption = [&]() -> const DisruptionCurve& {
    if (!curve) curve = disruption_curve(g, plan, config.weighted);
    return *curve;
  };
  for (Metric m : config.metrics) {
    std::vector<double> x, y;
    switch (m) {
      case Metric::Disruption:
        for (const auto& s : disruption().steps) {
          x.push_back(s.fraction_removed);
          y.push_back(s.disruption);
        }
        break;
      case Metric::Population:
        for (const auto& p : population_curve(g, plan)) {
          x.push_back(p.fraction_included);
          y.push_back(p.population_fraction);
        }
        break;
      case Metric::Giant:
        for (const auto& p : giant_component_curve(g, plan)) {
          x.push_back(static_cast<double>(p.k) / c);
          y.push_back(p.fraction);
        }
        break;
      case Metric::LocalCheeger:
        for (const auto& p : local_cheeger_curve(g, plan, config.weighted)) {
          x.push_back(static_cast<double>(p.k) / c);
          y.push_back(p.value);
        }
        break;
      case Metric::Dauc:
        out.scalars.push_back(dauc(disruption()));
        break;
      case Metric::Lambda2: {
        SpectralOptions opts;
        opts.weighted = config.weighted;
        out.scalars.push_back(lambda2(g, opts).value);
        break;
      }
    }
    if (is_series(m)) {
      out.series.push_back(std::move(y));
      out.series_x.push_back(std::move(x));
    }
  }
  if (config.rewiring) {
    RewiringOptions opts{config.weighted, config.rank_by};
    out.trace = rewiring_sweep(g, config.rewiring->direction, config.rewiring->fractions, seed, opts);
  }
  return out;
}

}  // namespace

const char* tool_version() noexcept { return DISRUPTION_VERSION; }

const char* to_string(Metric m) noexcept {
  switch (m) {
    case Metric::Disruption: return "disruption";
    case Metric::Dauc: return "dauc";
    case Metric::Population: return "population";
    case Metric::Giant: return "giant";
    case Metric::LocalCheeger: return "local_cheeger";
    case Metric::Lambda2: return "lambda2";
  }
  return "unknown";
}

Metric parse_metric(const std::string& text) {
  for (Metric m : {Metric::Disruption, Metric::Dauc, Metric::Population, Metric::Giant, Metric::LocalCheeger,
                   Metric::Lambda2}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown metric '" + text +
                                              "' (expected disruption|dauc|population|giant|local_cheeger|lambda2)");
}

void ExperimentConfig::validate() const {
  if (edge_list.has_value() == generator.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "config needs exactly one input source (edge_list or generator)");
  }
  if (runs < 1) throw Error(ErrorCode::InvalidArgument, "runs must be >= 1");
  if (metrics.empty()) throw Error(ErrorCode::InvalidArgument, "at least one metric is required");
  if (std::set<Metric>(metrics.begin(), metrics.end()).size() != metrics.size()) {
    throw Error(ErrorCode::InvalidArgument, "metrics must not repeat");
  }
  if (generator) disruption::validate(*generator);
  if (rewiring) {
    if (rewiring->fractions.empty()) throw Error(ErrorCode::InvalidArgument, "rewiring needs at least one fraction");
    for (std::size_t i = 0; i < rewiring->fractions.size(); ++i) {
      const double f = rewiring->fractions[i];
      if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rewiring fractions must lie in [0, 1]");
      if (i > 0 && f < rewiring->fractions[i - 1]) {
        throw Error(ErrorCode::InvalidArgument, "rewiring fractions must be ascending");
      }
    }
  }
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(e.what());
  }
  check_keys(doc, "config", {"input", "metrics", "rank_by", "weighted", "seed", "runs", "rewiring", "output"});
  ExperimentConfig cfg;
  if (!doc.contains("input")) config_error("input is required");
  const json& input = doc["input"];
  check_keys(input, "input", {"edge_list", "generator"});
  if (input.contains("edge_list")) cfg.edge_list = get<std::string>(input, "edge_list", "input");
  if (input.contains("generator")) cfg.generator = parse_generator(input["generator"]);

  if (doc.contains("metrics")) {
    cfg.metrics.clear();
    for (const auto& name : get<std::vector<std::string>>(doc, "metrics", "config")) {
      cfg.metrics.push_back(parse_metric(name));
    }
  }
  if (doc.contains("rank_by")) cfg.rank_by = parse_ranking_key(get<std::string>(doc, "rank_by", "config"));
  if (doc.contains("weighted")) cfg.weighted = get<bool>(doc, "weighted", "config");
  if (doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed", "config");
  if (doc.contains("runs")) cfg.runs = get<std::size_t>(doc, "runs", "config");
  if (doc.contains("rewiring")) {
    const json& r = doc["rewiring"];
    check_keys(r, "rewiring", {"direction", "fractions"});
    RewiringSettings rs;
    if (r.contains("direction")) rs.direction = parse_direction(get<std::string>(r, "direction", "rewiring"));
    rs.fractions = get<std::vector<double>>(r, "fractions", "rewiring");
    cfg.rewiring = rs;
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.output = get<std::string>(o, "path", "output");
    if (o.contains("format")) cfg.format = parse_output_format(get<std::string>(o, "format", "output"));
  }
  if (cfg.generator) cfg.generator->seed = cfg.seed;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path));
}

std::string config_to_json(const ExperimentConfig& config) {
  json input = json::object();
  if (config.edge_list) input["edge_list"] = *config.edge_list;
  if (config.generator) input["generator"] = generator_to_json(*config.generator);
  json metrics = json::array();
  for (Metric m : config.metrics) metrics.push_back(to_string(m));
  json doc = {{"input", input},
              {"metrics", metrics},
              {"rank_by", to_string(config.rank_by)},
              {"weighted", config.weighted},
              {"seed", config.seed},
              {"runs", config.runs},
              {"output", {{"path", config.output}, {"format", to_string(config.format)}}}};
  if (config.rewiring) {
    doc["rewiring"] = {{"direction", to_string(config.rewiring->direction)},
                       {"fractions", config.rewiring->fractions}};
  }
  return doc.dump(2);
}

SeriesSummary summarize_series(std::string name, std::vector<double> x,
                               const std::vector<std::vector<double>>& replicates) {
  if (replicates.empty()) throw Error(ErrorCode::Aggregation, name + ": no replicates");
  const std::size_t len = replicates.front().size();
  for (std::size_t r = 0; r < replicates.size(); ++r) {
    if (replicates[r].size() != len) {
      throw Error(ErrorCode::Aggregation, name + ": replicate " + std::to_string(r) + " has " +
                                              std::to_string(replicates[r].size()) + " steps, replicate 0 has " +
                                              std::to_string(len));
    }
  }
  if (x.size() != len) throw Error(ErrorCode::Aggregation, name + ": x axis length mismatch");
  SeriesSummary s{std::move(name), std::move(x), {}, {}, {}};
  std::vector<double> column(replicates.size());
  for (std::size_t k = 0; k < len; ++k) {
    for (std::size_t r = 0; r < replicates.size(); ++r) column[r] = replicates[r][k];
    const double m = mean_of(column);
    const double h = half_width(column, m);
    s.mean.push_back(m);
    s.lower.push_back(m - h);
    s.upper.push_back(m + h);
  }
  return s;
}

ScalarSummary summarize_scalar(std::string name, std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::Aggregation, name + ": no replicates");
  ScalarSummary s{std::move(name), std::move(values), 0.0, 0.0, 0.0};
  s.mean = mean_of(s.values);
  const double h = half_width(s.values, s.mean);
  s.lower = s.mean - h;
  s.upper = s.mean + h;
  return s;
}

const SeriesSummary* ExperimentReport::find_series(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ScalarSummary* ExperimentReport::find_scalar(const std::string& name) const {
  for (const auto& s : scalars) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;

  std::vector<RunResult> runs;
  if (config.edge_list) {
    report.config.runs = 1;
    IngestResult in = ingest_edge_list(*config.edge_list);
    report.seeds.push_back(config.seed);
    runs.push_back(run_once(config, in.graph, config.seed));
    report.ingest = in.report;
  } else {
    report.config.generator->seed = config.seed;
    for (std::size_t i = 0; i < config.runs; ++i) report.seeds.push_back(derive_seed(config.seed, i));
    runs.resize(config.runs);
    parallel_for(config.runs, [&](std::size_t i) {
      GeneratorSpec spec = *config.generator;
      spec.seed = report.seeds[i];
      runs[i] = run_once(config, generate(spec), report.seeds[i]);
    });
  }

  std::size_t series_index = 0, scalar_index = 0;
  for (Metric m : config.metrics) {
    if (is_series(m)) {
      std::vector<double> x = runs.front().series_x[series_index];
      for (const auto& r : runs) {
        if (r.series_x[series_index].size() > x.size()) x = r.series_x[series_index];
      }
      std::vector<std::vector<double>> reps;
      for (const auto& r : runs) reps.push_back(resample_onto(x, r.series_x[series_index], r.series[series_index]));
      report.series.push_back(summarize_series(to_string(m), std::move(x), reps));
      ++series_index;
    } else {
      std::vector<double> values;
      for (const auto& r : runs) values.push_back(r.scalars[scalar_index]);
      report.scalars.push_back(summarize_scalar(to_string(m), std::move(values)));
      ++scalar_index;
    }
  }
  if (config.rewiring) {
    for (auto& r : runs) report.traces.push_back(std::move(r.trace));
  }
  return report;
}

std::string report_to_json(const ExperimentReport& report) {
  json doc;
  doc["tool"] = {{"name", "disruption"}, {"version", tool_version()}};
  doc["config"] = json::parse(config_to_json(report.config));
  doc["seeds"] = report.seeds;
  if (report.ingest) {
    const IngestReport& in = *report.ingest;
    doc["ingest"] = {{"rows", in.rows},   {"compressed_duplicates", in.compressed_duplicates},
                     {"users", in.users}, {"communities", in.communities},
                     {"edges", in.edges}, {"total_weight", in.total_weight}};
  }
  json series = json::object();
  for (const auto& s : report.series) {
    series[s.name] = {{"x", rounded(s.x)}, {"mean", rounded(s.mean)}, {"ci_lower", rounded(s.lower)},
                      {"ci_upper", rounded(s.upper)}};
  }
  doc["series"] = series;
  json scalars = json::object();
  for (const auto& s : report.scalars) {
    scalars[s.name] = {{"values", rounded(s.values)},
                       {"mean", round_to_output(s.mean)},
                       {"ci_lower", round_to_output(s.lower)},
                       {"ci_upper", round_to_output(s.upper)}};
  }
  doc["scalars"] = scalars;
  if (!report.traces.empty()) {
    json traces = json::array();
    for (const auto& t : report.traces) traces.push_back(json::parse(trace_to_json(t)));
    doc["rewiring"] = traces;
  }
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "metric,index,x,mean,ci_lower,ci_upper\n";
  for (const auto& s : report.series) {
    for (std::size_t k = 0; k < s.mean.size(); ++k) {
      out << s.name << ',' << k << ',' << format_number(s.x[k]) << ',' << format_number(s.mean[k]) << ','
          << format_number(s.lower[k]) << ',' << format_number(s.upper[k]) << '\n';
    }
  }
  for (const auto& s : report.scalars) {
    out << s.name << ",,," << format_number(s.mean) << ',' << format_number(s.lower) << ','
        << format_number(s.upper) << '\n';
  }
  return out.str();
}

}  // namespace disruption
