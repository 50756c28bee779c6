#pragma once

#include <cstddef>
#include <optional>

#include "disruption/graph.hpp"

namespace disruption {

struct SpectralOptions {
  /// Residual bound ||L y - theta y|| for the returned unit Ritz vector; this
  /// also bounds the eigenvalue error.
  double tolerance = 1e-8;
  bool weighted = true;
  std::size_t krylov_dimension = 48;
  std::size_t max_restarts = 500;
  std::uint64_t seed = 0x5eed;
};

struct Lambda2Result {
  double value = 0.0;
  double residual = 0.0;
  std::size_t restarts = 0;
  /// Vertices (users + communities) of the component the value refers to.
  std::size_t component_vertices = 0;
  /// The input was disconnected and only its largest component was used.
  bool restricted_to_giant_component = false;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual)
      : Error(ErrorCode::Convergence, message), residual_(residual) {}
  double achieved_residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Second-smallest eigenvalue of I - D^-1/2 A D^-1/2 over the user+community
/// adjacency of the largest connected component. Uses restarted Lanczos with
/// full reorthogonalisation against the deflated null vector D^1/2 1.
Lambda2Result lambda2(const BipartiteGraph& g, const SpectralOptions& options = {});

/// Largest connected component (both vertex classes counted) as a graph.
BipartiteGraph largest_component(const BipartiteGraph& g);

struct CheegerEstimate {
  double lambda2 = 0.0;
  double lower = 0.0;  // lambda2 / 2
  double upper = 0.0;  // sqrt(2 lambda2)
  std::optional<double> exact;
  bool restricted_to_giant_component = false;
};

inline constexpr std::size_t kBruteForceVertexLimit = 24;

/// Bounds from lambda2, plus the exact value when the component is small
/// enough to enumerate.
CheegerEstimate cheeger_bounds(const BipartiteGraph& g, const SpectralOptions& options = {});

/// Exact min |dA| / |A| over vertex subsets with 0 < |A| <= |V| / 2, where
/// |dA| is the weight of edges leaving A and |A| the weight of edges touching
/// A. Throws TooLarge above kBruteForceVertexLimit vertices.
double brute_force_cheeger(const BipartiteGraph& g, bool weighted = true);

}  // namespace disruption
