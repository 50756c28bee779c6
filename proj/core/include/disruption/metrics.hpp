#pragma once

#include <cstddef>
#include <vector>

#include "disruption/graph.hpp"

namespace disruption {

/// State after the k largest communities (set A) have been removed.
///
/// A user survives while it keeps at least one edge to a community outside A.
/// `cut_weight` is the survivors' edge weight into A and `survivor_weight` is
/// the survivors' original degree sum, so disruption = cut / survivor. Both
/// are integers so that curves can be compared exactly.
struct DisruptionStep {
  std::size_t k = 0;
  double fraction_removed = 0.0;
  double disruption = 0.0;
  std::size_t surviving_users = 0;
  /// Survivors' remaining edge weight (edges to communities outside A).
  Weight surviving_edge_weight = 0;
  Weight cut_weight = 0;
  Weight survivor_weight = 0;

  friend bool operator==(const DisruptionStep&, const DisruptionStep&) = default;
};

struct DisruptionCurve {
  std::vector<DisruptionStep> steps;
  bool weighted = true;

  std::size_t size() const noexcept { return steps.size(); }
  std::vector<double> values() const;
};

/// Cumulative disruption for k = 1..C. When nobody survives the step reports
/// disruption 1. Computed in one sweep over users bucketed by
/// smallest_community_rank; never mutates a graph.
DisruptionCurve disruption_curve(const BipartiteGraph& g, const RemovalPlan& plan, bool weighted = true);

/// Trapezoidal area under disruption against ln(k/C), divided by ln(C).
/// A single-step curve returns its only value.
double dauc(const DisruptionCurve& curve);
double dauc(const std::vector<double>& disruption);

struct PopulationPoint {
  double fraction_included;
  double population_fraction;
};

/// Cumulative membership share as communities are added smallest-first
/// (reverse plan order). Users in several communities count once per membership.
std::vector<PopulationPoint> population_curve(const BipartiteGraph& g, const RemovalPlan& plan);

struct GiantComponentPoint {
  std::size_t k;
  std::size_t giant_size;
  double fraction;
};

/// Largest component (users and communities both counted) after each
/// cumulative removal, starting at the k = 0 baseline. Users left without
/// edges are pruned.
std::vector<GiantComponentPoint> giant_component_curve(const BipartiteGraph& g, const RemovalPlan& plan);

struct LocalCheegerPoint {
  std::size_t k;
  Weight boundary_weight;
  Weight incident_weight;
  double value;
};

/// |dA| / |A| for each removal prefix A: |A| is the weight of edges incident
/// to A and |dA| the weight of those edges whose user keeps an edge outside A.
std::vector<LocalCheegerPoint> local_cheeger_curve(const BipartiteGraph& g, const RemovalPlan& plan,
                                                   bool weighted = true);

}  // namespace disruption
