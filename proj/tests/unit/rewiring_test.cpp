#include <gtest/gtest.h>

#include <random>

#include "disruption/generators.hpp"
#include "disruption/rewiring.hpp"
#include "oracles.hpp"

using namespace disruption;

TEST(Assortativity, FourEdgeToyMatchesPearson) {
  std::vector<EdgeRecord> r{{"u1", "A"}, {"u1", "B"}, {"u2", "A"}, {"u3", "C"}};
  const auto g = build_graph(r);
  std::vector<double> x, y;
  for (const auto& e : g.edges()) {
    x.push_back(static_cast<double>(g.user_weighted_degree(e.user)));
    y.push_back(static_cast<double>(g.community_weighted_degree(e.community)));
  }
  const auto a = user_community_assortativity(g);
  ASSERT_TRUE(a.defined);
  EXPECT_NEAR(a.value, oracle::pearson(x, y), 1e-12);
}

TEST(Assortativity, RandomGraphsMatchPearson) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto g = build_graph(oracle::random_records(rng, 10, 40, 4));
    for (bool weighted : {true, false}) {
      std::vector<double> x, y;
      for (const auto& e : g.edges()) {
        x.push_back(static_cast<double>(g.user_degree(e.user, weighted)));
        y.push_back(static_cast<double>(g.community_degree(e.community, weighted)));
      }
      const auto a = user_community_assortativity(g, weighted);
      if (a.defined) EXPECT_NEAR(a.value, oracle::pearson(x, y), 1e-9);
    }
  }
}

TEST(Assortativity, NearStarIsUndefined) {
  const auto a = user_community_assortativity(near_star(20, 200, 1));
  EXPECT_FALSE(a.defined);
  EXPECT_EQ(a.value, 0.0);
}

TEST(Assortativity, RichClubIsPositive) {
  std::vector<EdgeRecord> r;
  for (int u = 0; u < 4; ++u) {
    for (int c = 0; c < 4; ++c) r.push_back({"h" + std::to_string(u), "H" + std::to_string(c)});
  }
  for (int u = 0; u < 6; ++u) r.push_back({"l" + std::to_string(u), "L" + std::to_string(u / 2)});
  const auto a = user_community_assortativity(build_graph(r));
  ASSERT_TRUE(a.defined);
  EXPECT_GT(a.value, 0.0);
}

TEST(ProjectedAssortativity, ToyStar) {
  std::vector<EdgeRecord> r{{"u1", "A"}, {"u2", "A"}, {"u1", "B"}, {"u2", "C"}};
  const auto p = projected_community_assortativities(build_graph(r));
  EXPECT_EQ(p.projected_edges, 2u);
  // symmetric pairs (2,1), (1,2), (2,1), (1,2)
  const std::vector<double> x{2, 1, 2, 1}, y{1, 2, 1, 2};
  ASSERT_TRUE(p.degree.defined);
  EXPECT_NEAR(p.degree.value, oracle::pearson(x, y), 1e-12);
  EXPECT_NEAR(p.population.value, -1.0, 1e-12);
}

TEST(ProjectedAssortativity, DisjointCommunitiesAreUndefined) {
  std::vector<EdgeRecord> r{{"u1", "A"}, {"u2", "B"}};
  const auto p = projected_community_assortativities(build_graph(r));
  EXPECT_EQ(p.projected_edges, 0u);
  EXPECT_FALSE(p.degree.defined);
  EXPECT_FALSE(p.population.defined);
}

TEST(Rewire, ZeroFractionIsNoOp) {
  const auto g = bipartite_er(20, 100, 0.1, 3);
  const auto result = rewire(g, RewireDirection::Increase, 0.0, 1);
  EXPECT_EQ(result.graph, g);
  ASSERT_EQ(result.trace.checkpoints.size(), 1u);
  EXPECT_EQ(result.trace.checkpoints[0].accepted_swaps, 0u);
  EXPECT_EQ(result.trace.checkpoints[0].user_community.value, user_community_assortativity(g).value);
}

TEST(Rewire, ConservesDegreesAndWeight) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 40; ++t) {
    const auto g = build_graph(oracle::random_records(rng, 12, 60, 2));
    if (g.num_edges() < 2) continue;
    for (auto dir : {RewireDirection::Increase, RewireDirection::Decrease}) {
      const auto out = rewire(g, dir, 0.5, static_cast<std::uint64_t>(t)).graph;
      EXPECT_EQ(out.num_edges(), g.num_edges());
      EXPECT_EQ(out.total_weight(), g.total_weight());
      for (bool w : {true, false}) {
        EXPECT_EQ(oracle::user_degrees(out, w), oracle::user_degrees(g, w));
        EXPECT_EQ(oracle::community_degrees(out, w), oracle::community_degrees(g, w));
      }
    }
  }
}

TEST(Rewire, SweepIsMonotoneInRequestedDirection) {
  const auto g = bipartite_er(40, 600, 0.05, 6);
  const std::vector<double> fractions{0.0, 0.05, 0.1, 0.2, 0.4};
  const auto up = rewiring_sweep(g, RewireDirection::Increase, fractions, 1);
  const auto down = rewiring_sweep(g, RewireDirection::Decrease, fractions, 1);
  ASSERT_EQ(up.checkpoints.size(), fractions.size());
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    EXPECT_GE(up.checkpoints[i].user_community.value, up.checkpoints[i - 1].user_community.value);
    EXPECT_LE(down.checkpoints[i].user_community.value, down.checkpoints[i - 1].user_community.value);
    EXPECT_GE(up.checkpoints[i].accepted_swaps, up.checkpoints[i - 1].accepted_swaps);
  }
  EXPECT_GT(up.checkpoints.back().user_community.value, up.checkpoints.front().user_community.value);
  EXPECT_LT(down.checkpoints.back().user_community.value, down.checkpoints.front().user_community.value);
}

TEST(Rewire, UnreachableTargetIsFlagged) {
  // every edge is identical in degree terms, so no swap changes the statistic
  const auto g = near_star(10, 50, 2);
  const auto trace = rewiring_sweep(g, RewireDirection::Increase, {0.5}, 3);
  EXPECT_FALSE(trace.checkpoints[0].reached);
  EXPECT_FALSE(trace.complete());
}

TEST(Rewire, SameSeedSameTrace) {
  const auto g = bipartite_er(30, 300, 0.05, 2);
  const auto a = rewiring_sweep(g, RewireDirection::Decrease, {0.1, 0.3}, 9);
  const auto b = rewiring_sweep(g, RewireDirection::Decrease, {0.1, 0.3}, 9);
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    EXPECT_EQ(a.checkpoints[i].accepted_swaps, b.checkpoints[i].accepted_swaps);
    EXPECT_EQ(a.checkpoints[i].user_community.value, b.checkpoints[i].user_community.value);
    EXPECT_EQ(a.checkpoints[i].dauc, b.checkpoints[i].dauc);
  }
}

TEST(Rewire, RejectsBadFractions) {
  const auto g = bipartite_er(10, 50, 0.2, 1);
  EXPECT_THROW(rewire(g, RewireDirection::Increase, 1.5, 1), Error);
  EXPECT_THROW(rewiring_sweep(g, RewireDirection::Increase, {0.3, 0.1}, 1), Error);
  EXPECT_THROW(parse_direction("sideways"), Error);
}
