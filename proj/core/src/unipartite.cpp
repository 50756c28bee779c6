#include "disruption/unipartite.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "disruption/random.hpp"

namespace disruption {

UnipartiteGraph::UnipartiteGraph(std::vector<std::string> node_ids,
                                 std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                                 std::span<const Weight> weights)
    : node_ids_(std::move(node_ids)) {
  if (!weights.empty() && weights.size() != edges.size()) {
    throw Error(ErrorCode::InvalidArgument, "edge and weight counts differ");
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, Weight> merged;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [a, b] = edges[i];
    const Weight w = weights.empty() ? 1 : weights[i];
    if (a >= node_ids_.size() || b >= node_ids_.size()) {
      throw Error(ErrorCode::InvalidArgument, "unipartite edge endpoint out of range");
    }
    if (a == b) throw Error(ErrorCode::InvalidArgument, "self-loop on node " + node_ids_[a]);
    if (w < 1) throw Error(ErrorCode::InvalidArgument, "unipartite edge weight must be >= 1");
    merged[{std::min(a, b), std::max(a, b)}] += w;
  }

  offsets_.assign(node_ids_.size() + 1, 0);
  for (const auto& [e, w] : merged) {
    ++offsets_[e.first + 1];
    ++offsets_[e.second + 1];
    total_weight_ += w;
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * merged.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [e, w] : merged) {
    adjacency_[fill[e.first]++] = {e.second, w};
    adjacency_[fill[e.second]++] = {e.first, w};
  }
  num_edges_ = merged.size();
}

UnipartiteGraph UnipartiteGraph::from_records(std::span<const UnipartiteEdgeRecord> records) {
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<std::string> ids;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<Weight> weights;
  auto lookup = [&](const std::string& id) {
    auto [it, inserted] = index.try_emplace(id, static_cast<std::uint32_t>(ids.size()));
    if (inserted) ids.push_back(id);
    return it->second;
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.source.empty() || r.target.empty()) {
      throw Error(ErrorCode::InvalidRecord, "record " + std::to_string(i) + ": empty identifier");
    }
    if (r.weight < 1) {
      throw Error(ErrorCode::InvalidRecord, "record " + std::to_string(i) + ": weight must be >= 1");
    }
    if (r.source == r.target) {
      throw Error(ErrorCode::InvalidRecord, "record " + std::to_string(i) + ": self-loop");
    }
    const auto a = lookup(r.source);
    const auto b = lookup(r.target);
    edges.emplace_back(a, b);
    weights.push_back(r.weight);
  }
  if (edges.empty()) throw Error(ErrorCode::EmptyGraph, "no unipartite edges");
  return UnipartiteGraph(std::move(ids), edges, weights);
}

std::span<const Neighbor> UnipartiteGraph::neighbors(std::uint32_t v) const {
  const std::size_t begin = offsets_.at(v);
  return {adjacency_.data() + begin, offsets_[v + 1] - begin};
}

LabelPropagationResult label_propagation(const UnipartiteGraph& g, std::uint64_t seed, std::size_t max_rounds) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "label propagation on an empty graph");
  Rng rng = make_rng(seed);

  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0u);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);

  std::vector<Weight> score(n, 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> best;

  LabelPropagationResult result;
  while (result.rounds < max_rounds) {
    ++result.rounds;
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t changes = 0;
    for (std::uint32_t v : order) {
      const auto nbrs = g.neighbors(v);
      if (nbrs.empty()) continue;
      touched.clear();
      for (const Neighbor& nb : nbrs) {
        const auto l = label[nb.node];
        if (score[l] == 0) touched.push_back(l);
        score[l] += nb.weight;
      }
      Weight top = 0;
      for (auto l : touched) top = std::max(top, score[l]);
      best.clear();
      for (auto l : touched) {
        if (score[l] == top) best.push_back(l);
      }
      const bool keep = score[label[v]] == top;
      for (auto l : touched) score[l] = 0;
      if (keep) continue;
      std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
      label[v] = best[pick(rng)];
      ++changes;
    }
    if (changes == 0) {
      result.converged = true;
      break;
    }
  }

  std::unordered_map<std::uint32_t, std::uint32_t> dense;
  result.labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto [it, inserted] = dense.try_emplace(label[v], static_cast<std::uint32_t>(dense.size()));
    result.labels[v] = it->second;
  }
  result.num_labels = dense.size();
  return result;
}

BipartiteGraph project_to_bipartite(const UnipartiteGraph& g, std::span<const std::uint32_t> labels) {
  if (labels.size() != g.num_nodes()) {
    throw Error(ErrorCode::InvalidArgument, "label vector does not cover every node");
  }
  const std::uint32_t num_labels = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  const std::size_t width = std::to_string(num_labels == 0 ? 0 : num_labels - 1).size();
  std::vector<std::string> community_ids(num_labels);
  for (std::uint32_t l = 0; l < num_labels; ++l) {
    std::string digits = std::to_string(l);
    community_ids[l] = "community-" + std::string(width - digits.size(), '0') + digits;
  }
  std::vector<std::string> user_ids(g.num_nodes());
  for (std::uint32_t v = 0; v < g.num_nodes(); ++v) user_ids[v] = g.node_id(v);

  std::vector<Edge> edges;
  for (std::uint32_t v = 0; v < g.num_nodes(); ++v) {
    for (const Neighbor& nb : g.neighbors(v)) edges.push_back(Edge{v, labels[nb.node], nb.weight});
  }
  if (edges.empty()) throw Error(ErrorCode::EmptyGraph, "unipartite graph has no edges to project");
  return BipartiteGraph::from_indexed(std::move(user_ids), std::move(community_ids), edges);
}

ConversionResult convert_unipartite(const UnipartiteGraph& g, std::uint64_t seed, std::size_t max_rounds) {
  ConversionResult out;
  out.labeling = label_propagation(g, seed, max_rounds);
  out.graph = project_to_bipartite(g, out.labeling.labels);
  return out;
}

}  // namespace disruption
