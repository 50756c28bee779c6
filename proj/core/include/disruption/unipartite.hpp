#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "disruption/graph.hpp"

namespace disruption {

struct UnipartiteEdgeRecord {
  std::string source;
  std::string target;
  Weight weight = 1;
};

struct Neighbor {
  std::uint32_t node;
  Weight weight;
};

/// Undirected weighted graph without self-loops. Parallel edges (in either
/// direction) are merged by summing weights.
class UnipartiteGraph {
 public:
  UnipartiteGraph() = default;
  UnipartiteGraph(std::vector<std::string> node_ids,
                  std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                  std::span<const Weight> weights = {});

  static UnipartiteGraph from_records(std::span<const UnipartiteEdgeRecord> records);

  std::size_t num_nodes() const noexcept { return node_ids_.size(); }
  std::size_t num_edges() const noexcept { return num_edges_; }
  const std::string& node_id(std::uint32_t v) const { return node_ids_.at(v); }
  std::span<const Neighbor> neighbors(std::uint32_t v) const;
  /// Sum of edge weights, each undirected edge counted once.
  Weight total_weight() const noexcept { return total_weight_; }

 private:
  std::vector<std::string> node_ids_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::size_t num_edges_ = 0;
  Weight total_weight_ = 0;
};

struct LabelPropagationResult {
  /// Dense labels 0..L-1, numbered by first appearance in node order.
  std::vector<std::uint32_t> labels;
  std::size_t num_labels = 0;
  std::size_t rounds = 0;
  bool converged = false;
};

/// Asynchronous weighted label propagation. Each round visits nodes in a
/// seeded random order; a node keeps its label if it is among the heaviest
/// incident labels, otherwise adopts one of them uniformly at random. Stops
/// after a round without changes or after max_rounds.
LabelPropagationResult label_propagation(const UnipartiteGraph& g, std::uint64_t seed,
                                         std::size_t max_rounds = 100);

/// One community per label; user u gets weight sum of its edges into each
/// label's nodes, its own label included. Isolated nodes produce no edges.
BipartiteGraph project_to_bipartite(const UnipartiteGraph& g, std::span<const std::uint32_t> labels);

struct ConversionResult {
  BipartiteGraph graph;
  LabelPropagationResult labeling;
  /// Label propagation collapsed everything into a single community.
  bool degenerate() const noexcept { return graph.num_communities() <= 1; }
};

ConversionResult convert_unipartite(const UnipartiteGraph& g, std::uint64_t seed, std::size_t max_rounds = 100);

}  // namespace disruption
