#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "disruption/error.hpp"

namespace disruption {

using UserIndex = std::uint32_t;
using CommunityIndex = std::uint32_t;
using Weight = std::int64_t;

/// One raw interaction row as it appears in an edge list.
struct EdgeRecord {
  std::string user;
  std::string community;
  Weight weight = 1;
};

struct Edge {
  UserIndex user;
  CommunityIndex community;
  Weight weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Membership {
  CommunityIndex community;
  Weight weight;

  friend bool operator==(const Membership&, const Membership&) = default;
};

/// Immutable weighted user-community graph.
///
/// Users and communities carry string identifiers and dense indexes. Indexes
/// are assigned in first-seen order over the edge list, and the edge list
/// holds each distinct (user, community) pair exactly once, in the order the
/// pair first appeared. Vertices without edges are never stored.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Builds from index-based edges over caller-supplied id tables. Duplicate
  /// pairs are merged by summing weights; ids without edges are dropped and
  /// the survivors are reindexed in first-seen order.
  static BipartiteGraph from_indexed(std::vector<std::string> user_ids,
                                     std::vector<std::string> community_ids,
                                     std::span<const Edge> edges);

  std::size_t num_users() const noexcept { return user_ids_.size(); }
  std::size_t num_communities() const noexcept { return community_ids_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::string& user_id(UserIndex u) const { return user_ids_.at(u); }
  const std::string& community_id(CommunityIndex c) const { return community_ids_.at(c); }
  const std::vector<std::string>& user_ids() const noexcept { return user_ids_; }
  const std::vector<std::string>& community_ids() const noexcept { return community_ids_; }

  /// Distinct adjacent users.
  std::size_t community_unique_degree(CommunityIndex c) const { return community_unique_degree_.at(c); }
  Weight community_weighted_degree(CommunityIndex c) const { return community_weighted_degree_.at(c); }
  std::span<const Membership> memberships(UserIndex u) const;
  std::span<const UserIndex> members(CommunityIndex c) const;

  /// Number of distinct communities the user belongs to.
  std::size_t user_membership_count(UserIndex u) const { return memberships(u).size(); }
  Weight user_weighted_degree(UserIndex u) const { return user_weighted_degree_.at(u); }

  /// Degree under the requested edge measure: weight sum, or distinct-edge count.
  Weight user_degree(UserIndex u, bool weighted) const {
    return weighted ? user_weighted_degree(u) : static_cast<Weight>(user_membership_count(u));
  }
  Weight community_degree(CommunityIndex c, bool weighted) const {
    return weighted ? community_weighted_degree(c) : static_cast<Weight>(community_unique_degree(c));
  }

  Weight total_weight() const noexcept { return total_weight_; }

  /// Same ids, indexes, edges and weights.
  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.user_ids_ == b.user_ids_ && a.community_ids_ == b.community_ids_ && a.edges_ == b.edges_;
  }

 private:
  void build_indexes();

  std::vector<std::string> user_ids_;
  std::vector<std::string> community_ids_;
  std::vector<Edge> edges_;

  std::vector<std::size_t> community_unique_degree_;
  std::vector<Weight> community_weighted_degree_;
  std::vector<Weight> user_weighted_degree_;
  // CSR adjacency in both directions.
  std::vector<std::size_t> user_offsets_;
  std::vector<Membership> user_adjacency_;
  std::vector<std::size_t> community_offsets_;
  std::vector<UserIndex> community_adjacency_;
  Weight total_weight_ = 0;
};

/// Builds a graph from raw records. Throws InvalidRecord for a non-positive
/// weight or empty id (message names the zero-based record position) and
/// EmptyGraph for empty input.
BipartiteGraph build_graph(std::span<const EdgeRecord> records);

enum class RankingKey { UniqueUsers, WeightedDegree };

const char* to_string(RankingKey key) noexcept;
RankingKey parse_ranking_key(const std::string& text);

/// Largest-first community removal order.
struct RemovalPlan {
  std::vector<CommunityIndex> order;
  RankingKey key = RankingKey::UniqueUsers;

  /// position[c] is the step (0-based) at which community c is removed.
  std::vector<std::size_t> positions() const;
};

/// Descending by ranking key, ties by ascending community identifier.
RemovalPlan removal_plan(const BipartiteGraph& g, RankingKey key = RankingKey::UniqueUsers);

/// For every user, the plan position of the last of its communities to be
/// removed, i.e. the step at which the user stops surviving.
std::vector<std::size_t> smallest_community_rank(const BipartiteGraph& g, const RemovalPlan& plan);

/// Throws PlanMismatch unless plan is a permutation of g's communities.
void check_plan(const BipartiteGraph& g, const RemovalPlan& plan);

}  // namespace disruption
