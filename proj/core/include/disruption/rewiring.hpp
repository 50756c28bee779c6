#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "disruption/graph.hpp"

namespace disruption {

/// A Pearson correlation that may be undefined (zero variance on one side,
/// or nothing to correlate). Undefined values report 0.
struct Assortativity {
  double value = 0.0;
  bool defined = false;
};

/// Pearson correlation over distinct edges between the endpoint user degree
/// and endpoint community degree.
Assortativity user_community_assortativity(const BipartiteGraph& g, bool weighted = true);

struct ProjectedAssortativity {
  Assortativity degree;
  Assortativity population;
  std::size_t projected_edges = 0;
};

/// Projects onto communities (one edge per pair sharing a user) and
/// correlates endpoint weighted degrees and endpoint populations, with each
/// undirected projected edge counted in both orientations.
ProjectedAssortativity projected_community_assortativities(const BipartiteGraph& g);

enum class RewireDirection { Increase, Decrease };

const char* to_string(RewireDirection d) noexcept;
RewireDirection parse_direction(const std::string& text);

struct RewiringCheckpoint {
  double target_fraction = 0.0;
  std::size_t accepted_swaps = 0;
  double achieved_fraction = 0.0;
  bool reached = true;
  Assortativity user_community;
  Assortativity projected_degree;
  Assortativity projected_population;
  double dauc = 0.0;
};

struct RewiringTrace {
  RewireDirection direction = RewireDirection::Increase;
  std::uint64_t seed = 0;
  std::vector<RewiringCheckpoint> checkpoints;
  /// Every requested target was reached.
  bool complete() const;
};

struct RewiringOptions {
  /// Degree measure used by the acceptance rule and the recorded assortativity.
  bool weighted = true;
  RankingKey ranking = RankingKey::UniqueUsers;
};

struct RewireResult {
  BipartiteGraph graph;
  RewiringTrace trace;
};

/// Degree-preserving swaps (u1-c1, u2-c2 -> u1-c2, u2-c1) accepted only when
/// they strictly move user-community assortativity in `direction`, create no
/// duplicate pair and exchange edges of equal weight. Runs until accepted /
/// edges >= target_fraction, or until a full reshuffled pass accepts nothing.
RewireResult rewire(const BipartiteGraph& g, RewireDirection direction, double target_fraction,
                    std::uint64_t seed, const RewiringOptions& options = {});

/// Cumulative rewiring with metrics recorded at each (ascending) fraction.
RewiringTrace rewiring_sweep(const BipartiteGraph& g, RewireDirection direction,
                             const std::vector<double>& fractions, std::uint64_t seed,
                             const RewiringOptions& options = {});

}  // namespace disruption
