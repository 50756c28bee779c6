#include "disruption/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace disruption {

namespace {

// Shared sweep state: per step k (0..C), the survivors' original degree sum
// and head count, plus the remaining weight of edges to communities at plan
// position >= k. Any user holding such an edge is a survivor, so the latter
// is exactly the survivors' remaining degree.
struct Sweep {
  std::vector<Weight> survivor_weight;   // index k
  std::vector<std::size_t> survivors;    // index k
  std::vector<Weight> remaining_weight;  // index k
  std::vector<Weight> removed_weight;    // index k: weight incident to first k communities
};

Sweep sweep(const BipartiteGraph& g, const RemovalPlan& plan, bool weighted) {
  const std::size_t num_c = g.num_communities();
  const auto rank = smallest_community_rank(g, plan);

  // Users bucketed by the step at which their last community goes.
  std::vector<Weight> bucket_weight(num_c, 0);
  std::vector<std::size_t> bucket_count(num_c, 0);
  for (UserIndex u = 0; u < g.num_users(); ++u) {
    bucket_weight[rank[u]] += g.user_degree(u, weighted);
    ++bucket_count[rank[u]];
  }

  Sweep s;
  s.survivor_weight.assign(num_c + 1, 0);
  s.survivors.assign(num_c + 1, 0);
  s.remaining_weight.assign(num_c + 1, 0);
  s.removed_weight.assign(num_c + 1, 0);
  // A user with rank r survives steps k <= r.
  for (std::size_t k = num_c; k-- > 0;) {
    s.survivor_weight[k] = s.survivor_weight[k + 1] + bucket_weight[k];
    s.survivors[k] = s.survivors[k + 1] + bucket_count[k];
    s.remaining_weight[k] = s.remaining_weight[k + 1] + g.community_degree(plan.order[k], weighted);
  }
  for (std::size_t k = 1; k <= num_c; ++k) {
    s.removed_weight[k] = s.removed_weight[k - 1] + g.community_degree(plan.order[k - 1], weighted);
  }
  return s;
}

}  // namespace

std::vector<double> DisruptionCurve::values() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.disruption);
  return out;
}

DisruptionCurve disruption_curve(const BipartiteGraph& g, const RemovalPlan& plan, bool weighted) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "disruption curve of an empty graph");
  const std::size_t num_c = g.num_communities();
  const Sweep s = sweep(g, plan, weighted);

  DisruptionCurve curve;
  curve.weighted = weighted;
  curve.steps.reserve(num_c);
  for (std::size_t k = 1; k <= num_c; ++k) {
    DisruptionStep step;
    step.k = k;
    step.fraction_removed = static_cast<double>(k) / static_cast<double>(num_c);
    step.surviving_users = s.survivors[k];
    step.survivor_weight = s.survivor_weight[k];
    step.surviving_edge_weight = s.remaining_weight[k];
    step.cut_weight = s.survivor_weight[k] - s.remaining_weight[k];
    step.disruption = step.survivor_weight == 0
                          ? 1.0
                          : static_cast<double>(step.cut_weight) / static_cast<double>(step.survivor_weight);
    curve.steps.push_back(step);
  }
  return curve;
}

double dauc(const std::vector<double>& y) {
  if (y.empty()) throw Error(ErrorCode::InvalidArgument, "DAUC of an empty curve");
  if (y.size() == 1) return y.front();
  const double n = static_cast<double>(y.size());
  double area = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    // x_k = ln(k / C); the width ln((k+1)/k) does not depend on C.
    const double width = std::log(static_cast<double>(i + 1) / static_cast<double>(i));
    area += 0.5 * (y[i - 1] + y[i]) * width;
  }
  return area / std::log(n);
}

double dauc(const DisruptionCurve& curve) { return dauc(curve.values()); }

std::vector<PopulationPoint> population_curve(const BipartiteGraph& g, const RemovalPlan& plan) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "population curve of an empty graph");
  check_plan(g, plan);
  const std::size_t num_c = g.num_communities();
  const double total = static_cast<double>(g.num_edges());
  std::vector<PopulationPoint> out;
  out.reserve(num_c);
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i < num_c; ++i) {
    cumulative += g.community_unique_degree(plan.order[num_c - 1 - i]);
    out.push_back({static_cast<double>(i + 1) / static_cast<double>(num_c),
                   static_cast<double>(cumulative) / total});
  }
  return out;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return size_[a];
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return size_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

std::vector<GiantComponentPoint> giant_component_curve(const BipartiteGraph& g, const RemovalPlan& plan) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "giant component curve of an empty graph");
  check_plan(g, plan);
  const std::size_t num_c = g.num_communities();
  const std::size_t num_u = g.num_users();

  // Re-insert communities from last-removed to first. After re-inserting the
  // community at plan position k the graph is exactly the state after k
  // removals, and the largest component can only grow.
  DisjointSets sets(num_u + num_c);
  // with every community gone the users are isolated vertices of size one
  std::vector<std::size_t> giant(num_c + 1, 0);
  std::size_t best = num_u > 0 ? 1 : 0;
  giant[num_c] = best;
  for (std::size_t k = num_c; k-- > 0;) {
    const CommunityIndex c = plan.order[k];
    const std::size_t node = num_u + c;
    for (UserIndex u : g.members(c)) best = std::max(best, sets.unite(node, u));
    giant[k] = best;
  }

  std::vector<GiantComponentPoint> out;
  out.reserve(num_c + 1);
  const double base = static_cast<double>(giant[0]);
  for (std::size_t k = 0; k <= num_c; ++k) {
    out.push_back({k, giant[k], static_cast<double>(giant[k]) / base});
  }
  return out;
}

std::vector<LocalCheegerPoint> local_cheeger_curve(const BipartiteGraph& g, const RemovalPlan& plan,
                                                   bool weighted) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "local Cheeger curve of an empty graph");
  const std::size_t num_c = g.num_communities();
  const Sweep s = sweep(g, plan, weighted);
  std::vector<LocalCheegerPoint> out;
  out.reserve(num_c);
  for (std::size_t k = 1; k <= num_c; ++k) {
    const Weight boundary = s.survivor_weight[k] - s.remaining_weight[k];
    const Weight incident = s.removed_weight[k];
    out.push_back({k, boundary, incident,
                   incident == 0 ? 0.0 : static_cast<double>(boundary) / static_cast<double>(incident)});
  }
  return out;
}

}  // namespace disruption
