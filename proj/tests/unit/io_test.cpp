#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

#include "disruption/experiment.hpp"
#include "disruption/generators.hpp"
#include "disruption/io.hpp"
#include "disruption/metrics.hpp"
#include "disruption/random.hpp"

using namespace disruption;
using json = nlohmann::json;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("disruption-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::uint64_t> derive_seeds_for_test(const ExperimentConfig& cfg) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < cfg.runs; ++i) out.push_back(derive_seed(cfg.seed, i));
  return out;
}

IngestResult parse(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in, "mem.csv");
}

}  // namespace

TEST(Ingest, CompressesDuplicates) {
  const auto r = parse("user,community,weight\nu1,A,1\nu1,A,2\nu2,A,1\n");
  EXPECT_EQ(r.report.rows, 3u);
  EXPECT_EQ(r.report.edges, 2u);
  EXPECT_EQ(r.report.compressed_duplicates, 1u);
  EXPECT_EQ(r.report.users, 2u);
  EXPECT_EQ(r.report.communities, 1u);
  EXPECT_EQ(r.graph.edges()[0].weight, 3);
}

TEST(Ingest, WeightColumnIsOptional) {
  const auto r = parse("user,community\r\nu1,A\r\n\r\nu2,\"B, Inc\"\r\n");
  for (const auto& e : r.graph.edges()) EXPECT_EQ(e.weight, 1);
  EXPECT_EQ(r.graph.community_id(1), "B, Inc");
}

TEST(Ingest, ReportsLineNumbers) {
  try {
    parse("user,community,weight\nu1,A,1\nu2,B,zero\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidRecord);
    EXPECT_NE(std::string(e.what()).find("mem.csv:3"), std::string::npos) << e.what();
  }
  try {
    parse("user,community\nu1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos);
  }
}

TEST(Ingest, MissingHeaderIsFormatError) {
  try {
    parse("u1,A,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Format);
  }
  try {
    parse("");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Format);
  }
}

TEST(Ingest, MissingFileIsIoError) {
  try {
    ingest_edge_list("/nonexistent/edges.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Ingest, RoundTripIsIdentical) {
  GeneratorSpec spec;
  spec.topology = Topology::PowerlawConfig;
  spec.communities = 80;
  spec.users = 500;
  spec.seed = 3;
  const auto g = generate(spec);
  std::ostringstream out;
  write_edge_list(out, g);
  std::istringstream in(out.str());
  EXPECT_EQ(read_edge_list(in).graph, g);

  std::vector<EdgeRecord> odd{{"a,b", "x\"y", 3}, {"c", "x\"y", 1}};
  const auto h = build_graph(odd);
  std::ostringstream out2;
  write_edge_list(out2, h);
  std::istringstream in2(out2.str());
  EXPECT_EQ(read_edge_list(in2).graph, h);
}

TEST(Ingest, UnipartiteFile) {
  std::istringstream in("source,target,weight\na,b,2\nb,c,1\n");
  const auto g = read_unipartite_edge_list(in);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.total_weight(), 3);
  std::istringstream bad("user,community\na,b\n");
  EXPECT_THROW(read_unipartite_edge_list(bad), Error);
}

TEST(Export, CurveCsvHasOneRowPerStep) {
  std::vector<EdgeRecord> r{{"u1", "A"}, {"u2", "A"}, {"u3", "A"}, {"u1", "B"}, {"u2", "C"}};
  const auto g = build_graph(r);
  std::ostringstream out;
  write_curve_csv(out, disruption_curve(g, removal_plan(g)));
  EXPECT_EQ(out.str(), "k,fraction_removed,disruption\n1,0.333333333333,0.5\n2,0.666666666667,0.5\n3,1,1\n");
}

TEST(Export, EmptyTraceIsHeaderOnly) {
  std::ostringstream out;
  write_trace_csv(out, RewiringTrace{});
  EXPECT_EQ(out.str(), "target_fraction,metric,value\n");
}

TEST(Export, JsonRoundTripsAtTwelveDigits) {
  const auto g = bipartite_er(40, 400, 0.03, 5);
  const auto curve = disruption_curve(g, removal_plan(g));
  const auto doc = json::parse(curve_to_json(curve));
  ASSERT_EQ(doc["steps"].size(), curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double v = doc["steps"][k]["disruption"].get<double>();
    EXPECT_EQ(v, std::strtod(format_number(curve.steps[k].disruption).c_str(), nullptr));
    EXPECT_EQ(format_number(v), format_number(curve.steps[k].disruption));
  }
  EXPECT_EQ(format_number(doc["dauc"].get<double>()), format_number(dauc(curve)));
}

TEST(Export, NumbersUseTwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-0.0), "0");
}

TEST(Output, EnvironmentDirectory) {
  const auto dir = temp_dir("env");
  setenv("DISRUPTION_OUTPUT_DIR", dir.c_str(), 1);
  EXPECT_EQ(resolve_output_path("a/b.csv"), dir / "a/b.csv");
  EXPECT_EQ(resolve_output_path("/abs.csv"), std::filesystem::path("/abs.csv"));
  write_text_file(resolve_output_path("a/b.csv"), "x");
  EXPECT_EQ(read_text_file(dir / "a/b.csv"), "x");
  unsetenv("DISRUPTION_OUTPUT_DIR");
  EXPECT_EQ(resolve_output_path("a/b.csv"), std::filesystem::path("a/b.csv"));
}

TEST(Config, ParsesAndEchoes) {
  const auto cfg = parse_experiment_config(R"({
    "input": {"generator": {"topology": "er", "communities": 30, "users": 300, "p": 0.05}},
    "metrics": ["disruption", "dauc", "giant"],
    "rank_by": "weight", "weighted": false, "seed": 9, "runs": 4,
    "rewiring": {"direction": "decrease", "fractions": [0.1, 0.2]},
    "output": {"path": "out.json", "format": "json"}
  })");
  EXPECT_EQ(cfg.generator->topology, Topology::BipartiteER);
  EXPECT_EQ(cfg.metrics.size(), 3u);
  EXPECT_EQ(cfg.rank_by, RankingKey::WeightedDegree);
  EXPECT_FALSE(cfg.weighted);
  EXPECT_EQ(cfg.runs, 4u);
  EXPECT_EQ(cfg.rewiring->direction, RewireDirection::Decrease);
  const auto again = parse_experiment_config(config_to_json(cfg));
  EXPECT_EQ(config_to_json(again), config_to_json(cfg));
}

TEST(Config, RejectsInvalidConfigs) {
  EXPECT_THROW(parse_experiment_config(R"({"metrics": ["dauc"]})"), Error);
  EXPECT_THROW(parse_experiment_config(R"({"input": {"edge_list": "a.csv", "generator": {"topology": "er"}}})"),
               Error);
  EXPECT_THROW(parse_experiment_config(R"({"input": {"edge_list": "a.csv"}, "runs": 0})"), Error);
  EXPECT_THROW(parse_experiment_config(R"({"input": {"edge_list": "a.csv"}, "colour": 1})"), Error);
  EXPECT_THROW(parse_experiment_config(R"({"input": {"edge_list": "a.csv"}, "metrics": ["size"]})"), Error);
  EXPECT_THROW(parse_experiment_config("{not json"), Error);
}

TEST(Summaries, SingleRunHasZeroWidth) {
  const auto s = summarize_series("d", {0.5, 1.0}, {{0.2, 0.4}});
  EXPECT_EQ(s.lower, s.mean);
  EXPECT_EQ(s.upper, s.mean);
}

TEST(Summaries, NormalInterval) {
  const auto s = summarize_scalar("x", {1.0, 2.0, 3.0, 4.0});
  const double sd = std::sqrt(((1.5 * 1.5) * 2 + (0.5 * 0.5) * 2) / 3.0);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.upper - s.mean, 1.96 * sd / 2.0, 1e-12);
}

TEST(Summaries, RefusesRaggedReplicates) {
  try {
    summarize_series("d", {0.5, 1.0}, {{0.1, 0.2}, {0.3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Aggregation);
  }
}

TEST(RunExperiment, NearStarStepOneIsExactlyHalf) {
  ExperimentConfig cfg;
  GeneratorSpec spec;
  spec.topology = Topology::NearStar;
  cfg.generator = spec;
  cfg.runs = 100;
  cfg.seed = 5;
  const auto report = run_experiment(cfg);
  ASSERT_EQ(report.seeds.size(), 100u);
  const auto* d = report.find_series("disruption");
  ASSERT_NE(d, nullptr);
  EXPECT_EQ(d->mean[0], 0.5);
  EXPECT_EQ(d->upper[0] - d->lower[0], 0.0);
  ASSERT_NE(report.find_scalar("dauc"), nullptr);
}

TEST(RunExperiment, FileInputIsSingleRunAndMatchesSubcommands) {
  const auto dir = temp_dir("run");
  GeneratorSpec spec;
  spec.topology = Topology::BipartiteBA;
  spec.communities = 40;
  spec.users = 400;
  spec.seed = 1;
  const auto g = generate(spec);
  std::ostringstream out;
  write_edge_list(out, g);
  write_text_file(dir / "g.csv", out.str());

  ExperimentConfig cfg;
  cfg.edge_list = (dir / "g.csv").string();
  cfg.runs = 7;
  const auto report = run_experiment(cfg);
  EXPECT_EQ(report.config.runs, 1u);
  ASSERT_TRUE(report.ingest.has_value());
  EXPECT_EQ(report.ingest->edges, g.num_edges());
  const auto ingested = ingest_edge_list(dir / "g.csv").graph;
  const auto curve = disruption_curve(ingested, removal_plan(ingested));
  EXPECT_EQ(report.find_series("disruption")->mean, curve.values());
  EXPECT_EQ(report.find_scalar("dauc")->mean, dauc(curve));
}

TEST(RunExperiment, ReportIsDeterministic) {
  const auto cfg = parse_experiment_config(R"({
    "input": {"generator": {"topology": "powerlaw", "communities": 30, "users": 400}},
    "metrics": ["disruption", "dauc", "population", "giant", "local_cheeger", "lambda2"],
    "seed": 3, "runs": 6, "rewiring": {"fractions": [0.0, 0.1]}
  })");
  const auto a = report_to_json(run_experiment(cfg));
  const auto b = report_to_json(run_experiment(cfg));
  EXPECT_EQ(a, b);
  const auto doc = json::parse(a);
  EXPECT_EQ(doc["seeds"].size(), 6u);
  EXPECT_EQ(doc["tool"]["version"], tool_version());
  EXPECT_EQ(doc["rewiring"].size(), 6u);
  EXPECT_EQ(report_to_csv(run_experiment(cfg)), report_to_csv(run_experiment(cfg)));
}

TEST(RunExperiment, RaggedReplicatesShareTheLongestGrid) {
  ExperimentConfig cfg;
  GeneratorSpec spec;
  spec.topology = Topology::BipartiteBA;
  spec.communities = 60;
  spec.users = 900;
  cfg.generator = spec;
  cfg.runs = 8;
  cfg.seed = 4;
  std::set<std::size_t> sizes;
  for (auto s : derive_seeds_for_test(cfg)) {
    spec.seed = s;
    sizes.insert(generate(spec).num_communities());
  }
  ASSERT_GT(sizes.size(), 1u) << "pick parameters that leave some communities empty";
  const auto report = run_experiment(cfg);
  const auto* d = report.find_series("disruption");
  EXPECT_EQ(d->x.size(), *sizes.rbegin());
  EXPECT_EQ(d->mean.back(), 1.0);
}
