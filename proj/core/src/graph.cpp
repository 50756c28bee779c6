#include "disruption/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace disruption {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::EmptyGraph: return "empty_graph";
    case ErrorCode::InvalidRecord: return "invalid_record";
    case ErrorCode::PlanMismatch: return "plan_mismatch";
    case ErrorCode::Format: return "format";
    case ErrorCode::Io: return "io";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::TooLarge: return "too_large";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Aggregation: return "aggregation";
  }
  return "unknown";
}

namespace {

constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();

std::uint64_t pair_key(UserIndex u, CommunityIndex c) {
  return (static_cast<std::uint64_t>(u) << 32) | c;
}

}  // namespace

BipartiteGraph BipartiteGraph::from_indexed(std::vector<std::string> user_ids,
                                            std::vector<std::string> community_ids,
                                            std::span<const Edge> edges) {
  std::vector<std::uint32_t> user_map(user_ids.size(), kUnassigned);
  std::vector<std::uint32_t> community_map(community_ids.size(), kUnassigned);
  std::unordered_map<std::uint64_t, std::size_t> seen;
  seen.reserve(edges.size());

  BipartiteGraph g;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.user >= user_ids.size() || e.community >= community_ids.size()) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoint index out of range");
    }
    if (e.weight < 1) {
      throw Error(ErrorCode::InvalidArgument, "edge weight must be >= 1");
    }
    if (user_map[e.user] == kUnassigned) {
      user_map[e.user] = static_cast<std::uint32_t>(g.user_ids_.size());
      g.user_ids_.push_back(std::move(user_ids[e.user]));
    }
    if (community_map[e.community] == kUnassigned) {
      community_map[e.community] = static_cast<std::uint32_t>(g.community_ids_.size());
      g.community_ids_.push_back(std::move(community_ids[e.community]));
    }
    const UserIndex u = user_map[e.user];
    const CommunityIndex c = community_map[e.community];
    auto [it, inserted] = seen.try_emplace(pair_key(u, c), g.edges_.size());
    if (inserted) {
      g.edges_.push_back(Edge{u, c, e.weight});
    } else {
      g.edges_[it->second].weight += e.weight;
    }
  }
  g.build_indexes();
  return g;
}

void BipartiteGraph::build_indexes() {
  const std::size_t num_u = user_ids_.size();
  const std::size_t num_c = community_ids_.size();
  community_unique_degree_.assign(num_c, 0);
  community_weighted_degree_.assign(num_c, 0);
  user_weighted_degree_.assign(num_u, 0);
  user_offsets_.assign(num_u + 1, 0);
  community_offsets_.assign(num_c + 1, 0);
  total_weight_ = 0;

  for (const Edge& e : edges_) {
    ++community_unique_degree_[e.community];
    community_weighted_degree_[e.community] += e.weight;
    user_weighted_degree_[e.user] += e.weight;
    ++user_offsets_[e.user + 1];
    ++community_offsets_[e.community + 1];
    total_weight_ += e.weight;
  }
  std::partial_sum(user_offsets_.begin(), user_offsets_.end(), user_offsets_.begin());
  std::partial_sum(community_offsets_.begin(), community_offsets_.end(), community_offsets_.begin());

  user_adjacency_.resize(edges_.size());
  community_adjacency_.resize(edges_.size());
  std::vector<std::size_t> user_fill(user_offsets_.begin(), user_offsets_.end() - 1);
  std::vector<std::size_t> community_fill(community_offsets_.begin(), community_offsets_.end() - 1);
  for (const Edge& e : edges_) {
    user_adjacency_[user_fill[e.user]++] = Membership{e.community, e.weight};
    community_adjacency_[community_fill[e.community]++] = e.user;
  }

  const std::size_t unique_sum =
      std::accumulate(community_unique_degree_.begin(), community_unique_degree_.end(), std::size_t{0});
  if (unique_sum != edges_.size() || user_offsets_.back() != edges_.size()) {
    throw Error(ErrorCode::InvalidArgument, "degree index does not match distinct edge count");
  }
}

std::span<const Membership> BipartiteGraph::memberships(UserIndex u) const {
  const std::size_t begin = user_offsets_.at(u);
  return {user_adjacency_.data() + begin, user_offsets_[u + 1] - begin};
}

std::span<const UserIndex> BipartiteGraph::members(CommunityIndex c) const {
  const std::size_t begin = community_offsets_.at(c);
  return {community_adjacency_.data() + begin, community_offsets_[c + 1] - begin};
}

BipartiteGraph build_graph(std::span<const EdgeRecord> records) {
  if (records.empty()) {
    throw Error(ErrorCode::EmptyGraph, "no edge records");
  }
  std::unordered_map<std::string, UserIndex> users;
  std::unordered_map<std::string, CommunityIndex> communities;
  std::vector<std::string> user_ids;
  std::vector<std::string> community_ids;
  std::vector<Edge> edges;
  edges.reserve(records.size());

  for (std::size_t i = 0; i < records.size(); ++i) {
    const EdgeRecord& r = records[i];
    if (r.user.empty() || r.community.empty()) {
      throw Error(ErrorCode::InvalidRecord, "record " + std::to_string(i) + ": empty identifier");
    }
    if (r.weight < 1) {
      throw Error(ErrorCode::InvalidRecord,
                  "record " + std::to_string(i) + ": weight must be >= 1, got " + std::to_string(r.weight));
    }
    auto [ui, new_user] = users.try_emplace(r.user, static_cast<UserIndex>(user_ids.size()));
    if (new_user) user_ids.push_back(r.user);
    auto [ci, new_comm] = communities.try_emplace(r.community, static_cast<CommunityIndex>(community_ids.size()));
    if (new_comm) community_ids.push_back(r.community);
    edges.push_back(Edge{ui->second, ci->second, r.weight});
  }
  return BipartiteGraph::from_indexed(std::move(user_ids), std::move(community_ids), edges);
}

const char* to_string(RankingKey key) noexcept {
  return key == RankingKey::UniqueUsers ? "users" : "weight";
}

RankingKey parse_ranking_key(const std::string& text) {
  if (text == "users") return RankingKey::UniqueUsers;
  if (text == "weight") return RankingKey::WeightedDegree;
  throw Error(ErrorCode::InvalidArgument, "unknown ranking key '" + text + "' (expected users|weight)");
}

std::vector<std::size_t> RemovalPlan::positions() const {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  return pos;
}

RemovalPlan removal_plan(const BipartiteGraph& g, RankingKey key) {
  if (g.empty()) {
    throw Error(ErrorCode::EmptyGraph, "cannot plan removals on an empty graph");
  }
  RemovalPlan plan;
  plan.key = key;
  plan.order.resize(g.num_communities());
  std::iota(plan.order.begin(), plan.order.end(), CommunityIndex{0});
  const bool weighted = key == RankingKey::WeightedDegree;
  std::sort(plan.order.begin(), plan.order.end(), [&](CommunityIndex a, CommunityIndex b) {
    const Weight da = g.community_degree(a, weighted);
    const Weight db = g.community_degree(b, weighted);
    if (da != db) return da > db;
    return g.community_id(a) < g.community_id(b);
  });
  return plan;
}

void check_plan(const BipartiteGraph& g, const RemovalPlan& plan) {
  if (plan.order.size() != g.num_communities()) {
    throw Error(ErrorCode::PlanMismatch, "plan covers " + std::to_string(plan.order.size()) +
                                             " communities, graph has " + std::to_string(g.num_communities()));
  }
  std::vector<bool> hit(g.num_communities(), false);
  for (CommunityIndex c : plan.order) {
    if (c >= hit.size() || hit[c]) {
      throw Error(ErrorCode::PlanMismatch, "plan is not a permutation of the graph's communities");
    }
    hit[c] = true;
  }
}

std::vector<std::size_t> smallest_community_rank(const BipartiteGraph& g, const RemovalPlan& plan) {
  check_plan(g, plan);
  const auto pos = plan.positions();
  std::vector<std::size_t> rank(g.num_users(), 0);
  for (UserIndex u = 0; u < g.num_users(); ++u) {
    for (const Membership& m : g.memberships(u)) rank[u] = std::max(rank[u], pos[m.community]);
  }
  return rank;
}

}  // namespace disruption
