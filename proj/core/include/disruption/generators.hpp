#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "disruption/graph.hpp"
#include "disruption/unipartite.hpp"

namespace disruption {

enum class Topology { NearStar, BipartiteBA, PowerlawConfig, BipartiteER, BipartiteSmallWorld };

const char* to_string(Topology t) noexcept;
Topology parse_topology(const std::string& text);

/// Parameters for one synthetic network. Fields a topology does not use are
/// ignored; the small-world generator takes its node count from `users`.
struct GeneratorSpec {
  Topology topology = Topology::NearStar;
  std::size_t communities = 150;
  std::size_t users = 3000;
  double gamma = 2.5;
  double p = 0.05;
  std::size_t neighborhood = 5;
  std::size_t edges_per_user = 2;
  std::uint64_t seed = 0;
};

void validate(const GeneratorSpec& spec);
BipartiteGraph generate(const GeneratorSpec& spec);

/// Every user links the hub (community 0) and one of the C-1 leaves chosen
/// uniformly; all weights 1.
BipartiteGraph near_star(std::size_t communities, std::size_t users, std::uint64_t seed);

/// Users arrive one at a time and pick `m` distinct communities with
/// probability proportional to current size + 1.
BipartiteGraph bipartite_ba(std::size_t communities, std::size_t users, std::size_t m, std::uint64_t seed);

/// Community degrees from a discrete power law (x_min = 1, zeta-normalised,
/// capped at U), each wired to a uniform sample of users without replacement.
BipartiteGraph powerlaw_config(std::size_t communities, std::size_t users, double gamma, std::uint64_t seed);

/// Draws one community degree; exposed for distribution tests.
std::size_t sample_powerlaw_degree(double gamma, std::size_t cap, std::uint64_t seed);

/// Each of the C*U user-community pairs present independently with probability p.
BipartiteGraph bipartite_er(std::size_t communities, std::size_t users, double p, std::uint64_t seed);

/// Ring lattice on `nodes` vertices, each joined to `neighborhood / 2`
/// neighbours per side, rewired with probability p.
UnipartiteGraph watts_strogatz(std::size_t nodes, std::size_t neighborhood, double p, std::uint64_t seed);

/// Watts-Strogatz graph converted through label propagation and projection.
ConversionResult bipartite_small_world(std::size_t nodes, std::size_t neighborhood, double p,
                                       std::uint64_t seed);

/// Zero-padded identifiers so that lexicographic and numeric order agree.
std::string padded_id(const std::string& prefix, std::size_t index, std::size_t count);

}  // namespace disruption
