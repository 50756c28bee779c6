#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "disruption/analytic.hpp"
#include "disruption/experiment.hpp"
#include "disruption/generators.hpp"
#include "disruption/io.hpp"
#include "disruption/metrics.hpp"
#include "disruption/rewiring.hpp"
#include "disruption/spectral.hpp"
#include "disruption/unipartite.hpp"

namespace dz = disruption;
using json = nlohmann::json;

namespace {

struct Common {
  std::string input;
  std::string topology;
  dz::GeneratorSpec spec;
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  bool weighted = true;
  std::string rank_by = "users";
  std::string output;
  std::string format = "csv";
};

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--output", c.output, "Output file (relative paths go under $DISRUPTION_OUTPUT_DIR); stdout if empty");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_seed(CLI::App* cmd, Common& c) { cmd->add_option("--seed", c.seed, "Random seed"); }

void add_generator(CLI::App* cmd, Common& c) {
  cmd->add_option("--generator", c.topology, "Synthetic topology: near_star, ba, powerlaw, er, small_world");
  cmd->add_option("--communities", c.spec.communities, "Number of communities");
  cmd->add_option("--users", c.spec.users, "Number of users (nodes for small_world)");
  cmd->add_option("--gamma", c.spec.gamma, "Power-law exponent");
  cmd->add_option("--p", c.spec.p, "Edge probability (er) or rewiring probability (small_world)");
  cmd->add_option("--neighborhood", c.spec.neighborhood, "Ring neighbourhood (small_world)");
  cmd->add_option("--edges-per-user", c.spec.edges_per_user, "Attachments per user (ba)");
}

void add_graph_input(CLI::App* cmd, Common& c) {
  auto* in = cmd->add_option("-i,--input", c.input, "Edge list CSV with header user,community[,weight]");
  add_generator(cmd, c);
  in->excludes(cmd->get_option("--generator"));
  add_seed(cmd, c);
  cmd->add_flag("--weighted,!--unweighted", c.weighted, "Use edge weights (default) or count edges");
  cmd->add_option("--rank-by", c.rank_by, "Community ranking key: users or weight")
      ->check(CLI::IsMember({"users", "weight"}));
}

dz::GeneratorSpec generator_spec(const Common& c, std::uint64_t seed) {
  dz::GeneratorSpec s = c.spec;
  s.topology = dz::parse_topology(c.topology);
  s.seed = seed;
  dz::validate(s);
  return s;
}

dz::BipartiteGraph load_graph(const Common& c) {
  if (!c.input.empty()) return dz::ingest_edge_list(c.input).graph;
  if (!c.topology.empty()) return dz::generate(generator_spec(c, c.seed));
  throw dz::Error(dz::ErrorCode::InvalidArgument, "an input is required: --input FILE or --generator TOPOLOGY");
}

void emit(const Common& c, const std::string& content) {
  if (c.output.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  dz::write_text_file(dz::resolve_output_path(c.output), content);
}

bool json_out(const Common& c) { return c.format == "json"; }

std::string num(double v) { return dz::format_number(v); }

// Ensemble path shared by the curve subcommands when --runs > 1.
bool maybe_ensemble(const Common& c, dz::Metric metric) {
  if (c.runs <= 1) return false;
  if (c.topology.empty()) {
    throw dz::Error(dz::ErrorCode::InvalidArgument, "--runs > 1 needs a --generator input");
  }
  dz::ExperimentConfig cfg;
  cfg.generator = generator_spec(c, c.seed);
  cfg.metrics = {metric};
  cfg.rank_by = dz::parse_ranking_key(c.rank_by);
  cfg.weighted = c.weighted;
  cfg.seed = c.seed;
  cfg.runs = c.runs;
  cfg.output = c.output;
  cfg.format = dz::parse_output_format(c.format);
  const dz::ExperimentReport report = dz::run_experiment(cfg);
  emit(c, json_out(c) ? dz::report_to_json(report) : dz::report_to_csv(report));
  return true;
}

void cmd_disrupt(const Common& c) {
  if (maybe_ensemble(c, dz::Metric::Disruption)) return;
  const auto g = load_graph(c);
  const auto curve = dz::disruption_curve(g, dz::removal_plan(g, dz::parse_ranking_key(c.rank_by)), c.weighted);
  std::ostringstream out;
  if (json_out(c)) {
    out << dz::curve_to_json(curve);
  } else {
    dz::write_curve_csv(out, curve);
  }
  emit(c, out.str());
}

void cmd_dauc(const Common& c) {
  if (maybe_ensemble(c, dz::Metric::Dauc)) return;
  const auto g = load_graph(c);
  const auto curve = dz::disruption_curve(g, dz::removal_plan(g, dz::parse_ranking_key(c.rank_by)), c.weighted);
  const double value = dz::dauc(curve);
  if (json_out(c)) {
    emit(c, json({{"dauc", dz::round_to_output(value)}, {"communities", g.num_communities()}}).dump(2) + "\n");
  } else {
    emit(c, "dauc\n" + num(value) + "\n");
  }
}

void cmd_population(const Common& c) {
  if (maybe_ensemble(c, dz::Metric::Population)) return;
  const auto g = load_graph(c);
  const auto points = dz::population_curve(g, dz::removal_plan(g, dz::parse_ranking_key(c.rank_by)));
  if (json_out(c)) {
    json arr = json::array();
    for (const auto& p : points) {
      arr.push_back({{"fraction_included", dz::round_to_output(p.fraction_included)},
                     {"population_fraction", dz::round_to_output(p.population_fraction)}});
    }
    emit(c, json({{"points", arr}}).dump(2) + "\n");
  } else {
    std::string out = "fraction_included,population_fraction\n";
    for (const auto& p : points) out += num(p.fraction_included) + "," + num(p.population_fraction) + "\n";
    emit(c, out);
  }
}

void cmd_giant(const Common& c) {
  if (maybe_ensemble(c, dz::Metric::Giant)) return;
  const auto g = load_graph(c);
  const auto points = dz::giant_component_curve(g, dz::removal_plan(g, dz::parse_ranking_key(c.rank_by)));
  if (json_out(c)) {
    json arr = json::array();
    for (const auto& p : points) {
      arr.push_back({{"k", p.k}, {"giant_size", p.giant_size}, {"fraction", dz::round_to_output(p.fraction)}});
    }
    emit(c, json({{"points", arr}}).dump(2) + "\n");
  } else {
    std::string out = "k,giant_size,fraction\n";
    for (const auto& p : points) {
      out += std::to_string(p.k) + "," + std::to_string(p.giant_size) + "," + num(p.fraction) + "\n";
    }
    emit(c, out);
  }
}

void cmd_cheeger(const Common& c, bool local, double tolerance) {
  const auto g = load_graph(c);
  if (local) {
    const auto points =
        dz::local_cheeger_curve(g, dz::removal_plan(g, dz::parse_ranking_key(c.rank_by)), c.weighted);
    if (json_out(c)) {
      json arr = json::array();
      for (const auto& p : points) {
        arr.push_back({{"k", p.k},
                       {"boundary_weight", p.boundary_weight},
                       {"incident_weight", p.incident_weight},
                       {"value", dz::round_to_output(p.value)}});
      }
      emit(c, json({{"points", arr}}).dump(2) + "\n");
    } else {
      std::string out = "k,boundary_weight,incident_weight,value\n";
      for (const auto& p : points) {
        out += std::to_string(p.k) + "," + std::to_string(p.boundary_weight) + "," +
               std::to_string(p.incident_weight) + "," + num(p.value) + "\n";
      }
      emit(c, out);
    }
    return;
  }
  dz::SpectralOptions opts;
  opts.weighted = c.weighted;
  opts.tolerance = tolerance;
  opts.seed = c.seed;
  const auto est = dz::cheeger_bounds(g, opts);
  if (json_out(c)) {
    json doc = {{"lambda2", dz::round_to_output(est.lambda2)},
                {"lower", dz::round_to_output(est.lower)},
                {"upper", dz::round_to_output(est.upper)},
                {"exact", est.exact ? json(dz::round_to_output(*est.exact)) : json(nullptr)},
                {"restricted_to_giant_component", est.restricted_to_giant_component}};
    emit(c, doc.dump(2) + "\n");
  } else {
    emit(c, "lambda2,lower,upper,exact,restricted_to_giant_component\n" + num(est.lambda2) + "," + num(est.lower) +
                "," + num(est.upper) + "," + (est.exact ? num(*est.exact) : std::string()) + "," +
                (est.restricted_to_giant_component ? "1" : "0") + "\n");
  }
}

void cmd_generate(const Common& c) {
  if (c.topology.empty()) throw dz::Error(dz::ErrorCode::InvalidArgument, "--generator is required");
  const auto g = dz::generate(generator_spec(c, c.seed));
  if (json_out(c)) {
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({g.user_id(e.user), g.community_id(e.community), e.weight});
    json spec = {{"topology", c.topology}, {"communities", c.spec.communities}, {"users", c.spec.users},
                 {"gamma", c.spec.gamma},  {"p", c.spec.p},                     {"neighborhood", c.spec.neighborhood},
                 {"edges_per_user", c.spec.edges_per_user}, {"seed", c.seed}};
    emit(c, json({{"generator", spec}, {"edges", edges}}).dump(2) + "\n");
  } else {
    std::ostringstream out;
    dz::write_edge_list(out, g);
    emit(c, out.str());
  }
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw dz::Error(dz::ErrorCode::InvalidArgument, "bad fraction '" + item + "'");
    }
  }
  return out;
}

void cmd_rewire(const Common& c, const std::string& direction, const std::string& fractions) {
  const auto g = load_graph(c);
  dz::RewiringOptions opts{c.weighted, dz::parse_ranking_key(c.rank_by)};
  const auto trace = dz::rewiring_sweep(g, dz::parse_direction(direction), parse_fractions(fractions), c.seed, opts);
  if (json_out(c)) {
    emit(c, dz::trace_to_json(trace));
  } else {
    std::ostringstream out;
    dz::write_trace_csv(out, trace);
    emit(c, out.str());
  }
}

dz::Pmf pmf_from_json(const json& j, const char* what) {
  const auto support = j.at("support").get<std::vector<std::size_t>>();
  const auto probs = j.at("probabilities").get<std::vector<double>>();
  if (support.size() != probs.size() || support.empty()) {
    throw dz::Error(dz::ErrorCode::Format, std::string(what) + ": support and probabilities must match and be non-empty");
  }
  std::size_t max = 0;
  for (auto s : support) max = std::max(max, s);
  dz::Pmf pmf(max + 1, 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) pmf[support[i]] += probs[i];
  return dz::normalized_pmf(pmf, what);
}

struct AnalyticArgs {
  std::string model;
  double ratio = 30.0;
  double mean = 1.2;
  std::size_t trials = 100;
  std::string correlation;
  double rho = 0.3;
  std::size_t validate_communities = 0;
};

dz::Marginals load_marginals(const AnalyticArgs& a) {
  if (a.model.empty()) return dz::er_like_marginals(a.ratio, a.mean, a.trials);
  json doc;
  try {
    doc = json::parse(dz::read_text_file(a.model));
    if (doc.contains("er_like")) {
      const json& e = doc["er_like"];
      return dz::er_like_marginals(e.at("ratio").get<double>(), e.at("mean_memberships").get<double>(),
                                   e.value("trials", std::size_t{100}));
    }
    return {pmf_from_json(doc.at("size_pmf"), "size_pmf"), pmf_from_json(doc.at("degree_pmf"), "degree_pmf")};
  } catch (const json::exception& e) {
    throw dz::Error(dz::ErrorCode::Format, a.model + ": " + e.what());
  }
}

void cmd_analytic(const Common& c, const AnalyticArgs& a) {
  const dz::Marginals m = load_marginals(a);
  if (!a.correlation.empty()) {
    const auto dir = a.correlation == "toward_max" ? dz::CorrelationDirection::TowardMax
                                                   : dz::CorrelationDirection::TowardMin;
    const auto points = dz::correlation_experiment(m.size_pmf, m.degree_pmf, a.rho, dir);
    if (json_out(c)) {
      json arr = json::array();
      for (const auto& p : points) {
        arr.push_back({{"n", p.n},
                       {"random", dz::round_to_output(p.random)},
                       {"correlated", dz::round_to_output(p.correlated)},
                       {"relative", p.defined ? json(dz::round_to_output(p.relative)) : json(nullptr)}});
      }
      emit(c, json({{"direction", a.correlation}, {"rho", a.rho}, {"points", arr}}).dump(2) + "\n");
    } else {
      std::string out = "n,random,correlated,relative\n";
      for (const auto& p : points) {
        out += std::to_string(p.n) + "," + num(p.random) + "," + num(p.correlated) + "," +
               (p.defined ? num(p.relative) : std::string()) + "\n";
      }
      emit(c, out);
    }
    return;
  }
  const auto model = dz::random_joint(m.size_pmf, m.degree_pmf);
  if (a.validate_communities > 0) {
    const auto report = dz::validate_against_samples(model, a.validate_communities, std::max<std::size_t>(c.runs, 2),
                                                     c.seed);
    std::string out = "n,analytic,mean,half_width,runs_present,within\n";
    json arr = json::array();
    for (const auto& v : report.classes) {
      out += std::to_string(v.n) + "," + num(v.analytic) + "," + num(v.mean) + "," + num(v.half_width) + "," +
             std::to_string(v.runs_present) + "," + (v.within ? "1" : "0") + "\n";
      arr.push_back({{"n", v.n},
                     {"analytic", dz::round_to_output(v.analytic)},
                     {"mean", dz::round_to_output(v.mean)},
                     {"half_width", dz::round_to_output(v.half_width)},
                     {"runs_present", v.runs_present},
                     {"within", v.within}});
    }
    emit(c, json_out(c) ? json({{"runs", report.runs}, {"seed", c.seed}, {"classes", arr}}).dump(2) + "\n" : out);
    return;
  }
  const auto points = dz::analytic_disruption(model);
  if (json_out(c)) {
    json arr = json::array();
    for (const auto& p : points) {
      arr.push_back({{"n", p.n},
                     {"u", dz::round_to_output(p.u)},
                     {"disruption", p.defined ? json(dz::round_to_output(p.disruption)) : json(nullptr)}});
    }
    emit(c, json({{"points", arr}}).dump(2) + "\n");
  } else {
    std::string out = "n,u,disruption\n";
    for (const auto& p : points) {
      out += std::to_string(p.n) + "," + num(p.u) + "," + (p.defined ? num(p.disruption) : std::string()) + "\n";
    }
    emit(c, out);
  }
}

void cmd_convert(const Common& c, std::size_t max_rounds) {
  if (c.input.empty()) throw dz::Error(dz::ErrorCode::InvalidArgument, "--input is required");
  const auto ug = dz::ingest_unipartite_edge_list(c.input);
  const auto result = dz::convert_unipartite(ug, c.seed, max_rounds);
  if (result.degenerate()) {
    std::cerr << "warning: label propagation found " << result.graph.num_communities()
              << " community; the bipartite graph is degenerate\n";
  }
  if (json_out(c)) {
    json labels = json::object();
    for (std::uint32_t v = 0; v < ug.num_nodes(); ++v) labels[ug.node_id(v)] = result.labeling.labels[v];
    json doc = {{"communities", result.graph.num_communities()},
                {"rounds", result.labeling.rounds},
                {"converged", result.labeling.converged},
                {"unipartite_weight", ug.total_weight()},
                {"bipartite_weight", result.graph.total_weight()},
                {"labels", labels}};
    emit(c, doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    dz::write_edge_list(out, result.graph);
    emit(c, out.str());
  }
}

void cmd_run(Common& c, const std::string& config_path) {
  dz::ExperimentConfig cfg = dz::load_experiment_config(config_path);
  if (!c.output.empty()) cfg.output = c.output;
  const dz::ExperimentReport report = dz::run_experiment(cfg);
  const std::string content =
      cfg.format == dz::OutputFormat::Json ? dz::report_to_json(report) : dz::report_to_csv(report);
  c.output = cfg.output;
  emit(c, content);
}

int fail(const char* code, const std::string& message, int status) {
  std::cerr << json({{"error", {{"code", code}, {"message", message}}}}).dump() << std::endl;
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community-removal disruption analysis for bipartite user/community networks", "disrupt"};
  app.set_version_flag("--version", dz::tool_version());
  app.require_subcommand(1);

  Common c;
  auto* disrupt = app.add_subcommand("disrupt", "Disruption curve under largest-first community removal");
  auto* dauc = app.add_subcommand("dauc", "Area under the disruption curve on a log axis");
  auto* population = app.add_subcommand("population", "Cumulative user share of the largest communities");
  auto* giant = app.add_subcommand("giant", "Giant component size under community removal");
  for (auto* cmd : {disrupt, dauc, population, giant}) {
    add_graph_input(cmd, c);
    cmd->add_option("--runs", c.runs, "Replicates for generator inputs (mean and 95% CI)")
        ->check(CLI::PositiveNumber);
    add_output(cmd, c);
  }

  auto* cheeger = app.add_subcommand("cheeger", "Spectral Cheeger bounds, or the local curve with --local");
  bool local = false;
  double tolerance = 1e-8;
  add_graph_input(cheeger, c);
  cheeger->add_flag("--local", local, "Boundary/incident ratio of the removed set at each step");
  cheeger->add_option("--tolerance", tolerance, "Eigensolver residual tolerance");
  add_output(cheeger, c);

  auto* generate = app.add_subcommand("generate", "Write a synthetic bipartite network as an edge list");
  add_generator(generate, c);
  add_seed(generate, c);
  add_output(generate, c);

  auto* rewire = app.add_subcommand("rewire", "Degree-preserving rewiring toward higher or lower assortativity");
  std::string direction = "increase";
  std::string fractions = "0.1,0.2,0.3,0.4,0.5";
  add_graph_input(rewire, c);
  rewire->add_option("--direction", direction, "increase or decrease")->check(CLI::IsMember({"increase", "decrease"}));
  rewire->add_option("--fractions", fractions, "Ascending swap fractions of the edge count, comma separated");
  add_output(rewire, c);

  auto* analytic = app.add_subcommand("analytic", "Analytic disruption per community size class");
  AnalyticArgs a;
  analytic->add_option("--model", a.model, "JSON model: size_pmf/degree_pmf or er_like");
  analytic->add_option("--ratio", a.ratio, "Users per community (er-like marginals)");
  analytic->add_option("--mean-memberships", a.mean, "Mean memberships per user (er-like marginals)");
  analytic->add_option("--trials", a.trials, "Binomial trials (er-like marginals)");
  analytic->add_option("--correlation", a.correlation, "toward_max or toward_min")
      ->check(CLI::IsMember({"toward_max", "toward_min"}));
  analytic->add_option("--rho", a.rho, "Interpolation weight toward the extreme joint")->check(CLI::Range(0.0, 1.0));
  analytic->add_option("--validate", a.validate_communities, "Compare with sampled networks of this many communities");
  analytic->add_option("--runs", c.runs, "Sampled networks for --validate")->check(CLI::PositiveNumber);
  add_seed(analytic, c);
  add_output(analytic, c);

  auto* convert = app.add_subcommand("convert", "Label-propagation conversion of a unipartite graph");
  std::size_t max_rounds = 100;
  convert->add_option("-i,--input", c.input, "CSV with header source,target[,weight]")->required();
  convert->add_option("--max-rounds", max_rounds, "Label propagation round limit");
  add_seed(convert, c);
  add_output(convert, c);

  auto* run = app.add_subcommand("run", "Run a JSON experiment configuration");
  std::string config_path;
  run->add_option("-c,--config", config_path, "Experiment configuration file")->required();
  run->add_option("-o,--output", c.output, "Override the configured output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 64);
  }

  try {
    if (*disrupt) cmd_disrupt(c);
    else if (*dauc) cmd_dauc(c);
    else if (*population) cmd_population(c);
    else if (*giant) cmd_giant(c);
    else if (*cheeger) cmd_cheeger(c, local, tolerance);
    else if (*generate) cmd_generate(c);
    else if (*rewire) cmd_rewire(c, direction, fractions);
    else if (*analytic) cmd_analytic(c, a);
    else if (*convert) cmd_convert(c, max_rounds);
    else if (*run) cmd_run(c, config_path);
  } catch (const dz::Error& e) {
    return fail(dz::to_string(e.code()), e.what(), 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
