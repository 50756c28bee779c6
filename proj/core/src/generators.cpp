#include "disruption/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>
#include <vector>

#include "disruption/random.hpp"

namespace disruption {

const char* to_string(Topology t) noexcept {
  switch (t) {
    case Topology::NearStar: return "near_star";
    case Topology::BipartiteBA: return "ba";
    case Topology::PowerlawConfig: return "powerlaw";
    case Topology::BipartiteER: return "er";
    case Topology::BipartiteSmallWorld: return "small_world";
  }
  return "unknown";
}

Topology parse_topology(const std::string& text) {
  for (Topology t : {Topology::NearStar, Topology::BipartiteBA, Topology::PowerlawConfig, Topology::BipartiteER,
                     Topology::BipartiteSmallWorld}) {
    if (text == to_string(t)) return t;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown topology '" + text + "' (expected near_star|ba|powerlaw|er|small_world)");
}

std::string padded_id(const std::string& prefix, std::size_t index, std::size_t count) {
  const std::size_t width = std::to_string(count == 0 ? 0 : count - 1).size();
  const std::string digits = std::to_string(index);
  return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

namespace {

std::vector<std::string> make_ids(const char* prefix, std::size_t count) {
  std::vector<std::string> ids(count);
  for (std::size_t i = 0; i < count; ++i) ids[i] = padded_id(prefix, i, count);
  return ids;
}

BipartiteGraph assemble(std::size_t communities, std::size_t users, const std::vector<Edge>& edges) {
  if (edges.empty()) throw Error(ErrorCode::EmptyGraph, "generator produced no edges");
  return BipartiteGraph::from_indexed(make_ids("u", users), make_ids("c", communities), edges);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, message);
}

// Fenwick tree over non-negative integer weights with prefix-search sampling.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0), values_(n, 0) {
    for (step_ = 1; step_ * 2 <= n; step_ *= 2) {
    }
  }
  void add(std::size_t i, std::int64_t delta) {
    values_[i] += delta;
    total_ += delta;
    for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
  }
  void set(std::size_t i, std::int64_t value) { add(i, value - values_[i]); }
  std::int64_t value(std::size_t i) const { return values_[i]; }
  std::int64_t total() const { return total_; }
  // Smallest index whose prefix sum exceeds target, for target in [0, total).
  std::size_t find(std::int64_t target) const {
    std::size_t pos = 0;
    for (std::size_t step = step_; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
  std::vector<std::int64_t> values_;
  std::int64_t total_ = 0;
  std::size_t step_ = 1;
};

// Floyd's algorithm: k distinct values from [0, n).
std::vector<std::uint32_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(k * 2);
  for (std::size_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    auto t = static_cast<std::uint32_t>(pick(rng));
    if (!chosen.insert(t).second) {
      t = static_cast<std::uint32_t>(j);
      chosen.insert(t);
    }
    out.push_back(t);
  }
  return out;
}

std::vector<double> powerlaw_cdf(double gamma, std::size_t cap) {
  // P(k) = k^-gamma / zeta(gamma) for k < cap; the cap absorbs the tail.
  const double zeta = std::riemann_zeta(gamma);
  std::vector<double> cdf;
  cdf.reserve(cap);
  double acc = 0.0;
  for (std::size_t k = 1; k < cap; ++k) {
    acc += std::pow(static_cast<double>(k), -gamma) / zeta;
    cdf.push_back(acc);
  }
  return cdf;
}

std::size_t draw_from_cdf(const std::vector<double>& cdf, std::size_t cap, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = unit(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
  if (it == cdf.end()) return cap;
  return static_cast<std::size_t>(it - cdf.begin()) + 1;
}

}  // namespace

void validate(const GeneratorSpec& s) {
  switch (s.topology) {
    case Topology::NearStar:
      require(s.communities >= 2, "near_star needs at least 2 communities");
      require(s.users >= 1, "near_star needs at least 1 user");
      break;
    case Topology::BipartiteBA:
      require(s.edges_per_user >= 1, "ba needs edges_per_user >= 1");
      require(s.communities >= s.edges_per_user, "ba needs communities >= edges_per_user");
      require(s.users >= 1, "ba needs at least 1 user");
      break;
    case Topology::PowerlawConfig:
      require(s.gamma > 1.0, "powerlaw needs gamma > 1");
      require(s.communities >= 1 && s.users >= 1, "powerlaw needs communities, users >= 1");
      break;
    case Topology::BipartiteER:
      require(s.p > 0.0 && s.p <= 1.0, "er needs p in (0, 1]");
      require(s.communities >= 1 && s.users >= 1, "er needs communities, users >= 1");
      break;
    case Topology::BipartiteSmallWorld:
      require(s.neighborhood >= 2, "small_world needs neighborhood >= 2");
      require(s.users > s.neighborhood, "small_world needs nodes > neighborhood");
      require(s.p >= 0.0 && s.p <= 1.0, "small_world needs p in [0, 1]");
      break;
  }
}

BipartiteGraph generate(const GeneratorSpec& s) {
  validate(s);
  switch (s.topology) {
    case Topology::NearStar: return near_star(s.communities, s.users, s.seed);
    case Topology::BipartiteBA: return bipartite_ba(s.communities, s.users, s.edges_per_user, s.seed);
    case Topology::PowerlawConfig: return powerlaw_config(s.communities, s.users, s.gamma, s.seed);
    case Topology::BipartiteER: return bipartite_er(s.communities, s.users, s.p, s.seed);
    case Topology::BipartiteSmallWorld:
      return bipartite_small_world(s.users, s.neighborhood, s.p, s.seed).graph;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown topology");
}

BipartiteGraph near_star(std::size_t communities, std::size_t users, std::uint64_t seed) {
  require(communities >= 2, "near_star needs at least 2 communities");
  require(users >= 1, "near_star needs at least 1 user");
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> leaf(1, communities - 1);
  std::vector<Edge> edges;
  edges.reserve(2 * users);
  for (std::size_t u = 0; u < users; ++u) {
    const auto user = static_cast<UserIndex>(u);
    edges.push_back({user, 0, 1});
    edges.push_back({user, static_cast<CommunityIndex>(leaf(rng)), 1});
  }
  return assemble(communities, users, edges);
}

BipartiteGraph bipartite_ba(std::size_t communities, std::size_t users, std::size_t m, std::uint64_t seed) {
  require(m >= 1 && m <= communities, "ba needs 1 <= edges_per_user <= communities");
  require(users >= 1, "ba needs at least 1 user");
  Rng rng = make_rng(seed);
  WeightTree weights(communities);
  for (std::size_t c = 0; c < communities; ++c) weights.add(c, 1);  // size 0, weight size + 1

  std::vector<Edge> edges;
  edges.reserve(users * m);
  std::vector<std::size_t> picks;
  std::vector<std::int64_t> saved;
  for (std::size_t u = 0; u < users; ++u) {
    picks.clear();
    saved.clear();
    for (std::size_t j = 0; j < m; ++j) {
      std::uniform_int_distribution<std::int64_t> draw(0, weights.total() - 1);
      const std::size_t c = weights.find(draw(rng));
      picks.push_back(c);
      saved.push_back(weights.value(c));
      weights.set(c, 0);
    }
    for (std::size_t j = 0; j < m; ++j) {
      weights.set(picks[j], saved[j] + 1);
      edges.push_back({static_cast<UserIndex>(u), static_cast<CommunityIndex>(picks[j]), 1});
    }
  }
  return assemble(communities, users, edges);
}

std::size_t sample_powerlaw_degree(double gamma, std::size_t cap, std::uint64_t seed) {
  require(gamma > 1.0 && cap >= 1, "powerlaw degree needs gamma > 1 and cap >= 1");
  Rng rng = make_rng(seed);
  return draw_from_cdf(powerlaw_cdf(gamma, cap), cap, rng);
}

BipartiteGraph powerlaw_config(std::size_t communities, std::size_t users, double gamma, std::uint64_t seed) {
  require(gamma > 1.0, "powerlaw needs gamma > 1");
  require(communities >= 1 && users >= 1, "powerlaw needs communities, users >= 1");
  Rng rng = make_rng(seed);
  const auto cdf = powerlaw_cdf(gamma, users);
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < communities; ++c) {
    const std::size_t degree = draw_from_cdf(cdf, users, rng);
    for (auto u : sample_without_replacement(users, degree, rng)) {
      edges.push_back({u, static_cast<CommunityIndex>(c), 1});
    }
  }
  return assemble(communities, users, edges);
}

BipartiteGraph bipartite_er(std::size_t communities, std::size_t users, double p, std::uint64_t seed) {
  require(p > 0.0 && p <= 1.0, "er needs p in (0, 1]");
  require(communities >= 1 && users >= 1, "er needs communities, users >= 1");
  Rng rng = make_rng(seed);
  const std::uint64_t total = static_cast<std::uint64_t>(communities) * users;
  std::vector<Edge> edges;
  if (p >= 1.0) {
    edges.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) {
      edges.push_back({static_cast<UserIndex>(i % users), static_cast<CommunityIndex>(i / users), 1});
    }
  } else {
    // Skip ahead by geometric gaps between present pairs.
    std::geometric_distribution<std::uint64_t> gap(p);
    for (std::uint64_t i = gap(rng); i < total; i += 1 + gap(rng)) {
      edges.push_back({static_cast<UserIndex>(i % users), static_cast<CommunityIndex>(i / users), 1});
    }
  }
  return assemble(communities, users, edges);
}

UnipartiteGraph watts_strogatz(std::size_t nodes, std::size_t neighborhood, double p, std::uint64_t seed) {
  require(neighborhood >= 2 && nodes > neighborhood, "watts_strogatz needs nodes > neighborhood >= 2");
  require(p >= 0.0 && p <= 1.0, "watts_strogatz needs p in [0, 1]");
  Rng rng = make_rng(seed);
  const std::size_t half = neighborhood / 2;
  std::vector<std::set<std::uint32_t>> adj(nodes);
  auto link = [&](std::size_t a, std::size_t b) {
    adj[a].insert(static_cast<std::uint32_t>(b));
    adj[b].insert(static_cast<std::uint32_t>(a));
  };
  auto unlink = [&](std::size_t a, std::size_t b) {
    adj[a].erase(static_cast<std::uint32_t>(b));
    adj[b].erase(static_cast<std::uint32_t>(a));
  };
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t u = 0; u < nodes; ++u) link(u, (u + j) % nodes);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any(0, nodes - 1);
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t u = 0; u < nodes; ++u) {
      if (unit(rng) >= p) continue;
      const std::size_t v = (u + j) % nodes;
      if (adj[u].size() >= nodes - 1 || !adj[u].count(static_cast<std::uint32_t>(v))) continue;
      std::size_t w = any(rng);
      while (w == u || adj[u].count(static_cast<std::uint32_t>(w))) w = any(rng);
      unlink(u, v);
      link(u, w);
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t u = 0; u < nodes; ++u) {
    for (auto v : adj[u]) {
      if (u < v) edges.emplace_back(static_cast<std::uint32_t>(u), v);
    }
  }
  return UnipartiteGraph(make_ids("u", nodes), edges);
}

ConversionResult bipartite_small_world(std::size_t nodes, std::size_t neighborhood, double p, std::uint64_t seed) {
  const auto g = watts_strogatz(nodes, neighborhood, p, seed);
  return convert_unipartite(g, derive_seed(seed, 1));
}

}  // namespace disruption
