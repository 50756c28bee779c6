#include "disruption/rewiring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "disruption/metrics.hpp"
#include "disruption/random.hpp"

namespace disruption {

namespace {

// Pearson correlation of paired integer samples; undefined when either side
// is constant or fewer than two pairs exist.
template <typename Fn>
Assortativity pearson(std::size_t n, Fn&& pair_at) {
  if (n < 2) return {};
  double sx = 0, sy = 0;
  Weight min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = pair_at(i);
    if (i == 0) {
      min_x = max_x = x;
      min_y = max_y = y;
    }
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
    sx += static_cast<double>(x);
    sy += static_cast<double>(y);
  }
  if (min_x == max_x || min_y == max_y) return {};
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = pair_at(i);
    const double dx = static_cast<double>(x) - mx;
    const double dy = static_cast<double>(y) - my;
    cxy += dx * dy;
    cxx += dx * dx;
    cyy += dy * dy;
  }
  const double r = cxy / std::sqrt(cxx * cyy);
  return {std::clamp(r, -1.0, 1.0), true};
}

std::uint64_t pair_key(UserIndex u, CommunityIndex c) { return (static_cast<std::uint64_t>(u) << 32) | c; }

// Running swap state. Vertex degrees never change under accepted swaps, so
// the only Pearson statistic that moves is sum(x*y); its change for a swap is
// -(x1 - x2) * (y1 - y2), an exact integer.
class Rewirer {
 public:
  Rewirer(const BipartiteGraph& g, RewireDirection direction, std::uint64_t seed, const RewiringOptions& options)
      : source_(g), direction_(direction), options_(options), rng_(make_rng(seed)), edges_(g.edges()) {
    user_degree_.resize(g.num_users());
    community_degree_.resize(g.num_communities());
    for (UserIndex u = 0; u < g.num_users(); ++u) user_degree_[u] = g.user_degree(u, options.weighted);
    for (CommunityIndex c = 0; c < g.num_communities(); ++c) {
      community_degree_[c] = g.community_degree(c, options.weighted);
    }
    present_.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) present_.insert(pair_key(e.user, e.community));
    queue_.resize(edges_.size());
    std::iota(queue_.begin(), queue_.end(), std::size_t{0});
    std::shuffle(queue_.begin(), queue_.end(), rng_);
  }

  std::size_t accepted() const { return accepted_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Returns false if the target cannot be reached.
  bool advance_to(std::size_t target) {
    while (accepted_ < target) {
      if (exhausted_ || edges_.size() < 2) {
        exhausted_ = true;
        return false;
      }
      if (cursor_ + 1 >= queue_.size()) {
        if (pass_accepted_ == 0) {
          exhausted_ = true;
          return false;
        }
        std::shuffle(queue_.begin(), queue_.end(), rng_);
        cursor_ = 0;
        pass_accepted_ = 0;
      }
      const std::size_t i = queue_[cursor_];
      const std::size_t j = queue_[cursor_ + 1];
      cursor_ += 2;
      if (try_swap(edges_[i], edges_[j])) {
        ++accepted_;
        ++pass_accepted_;
      }
    }
    return true;
  }

  BipartiteGraph graph() const {
    return BipartiteGraph::from_indexed(source_.user_ids(), source_.community_ids(), edges_);
  }

 private:
  bool try_swap(Edge& a, Edge& b) {
    if (a.weight != b.weight || a.user == b.user || a.community == b.community) return false;
    const Weight dx = user_degree_[a.user] - user_degree_[b.user];
    const Weight dy = community_degree_[a.community] - community_degree_[b.community];
    const Weight delta = -dx * dy;
    if (direction_ == RewireDirection::Increase ? delta <= 0 : delta >= 0) return false;
    const auto new_a = pair_key(a.user, b.community);
    const auto new_b = pair_key(b.user, a.community);
    if (present_.count(new_a) || present_.count(new_b)) return false;
    present_.erase(pair_key(a.user, a.community));
    present_.erase(pair_key(b.user, b.community));
    present_.insert(new_a);
    present_.insert(new_b);
    std::swap(a.community, b.community);
    return true;
  }

  const BipartiteGraph& source_;
  RewireDirection direction_;
  RewiringOptions options_;
  Rng rng_;
  std::vector<Edge> edges_;
  std::vector<Weight> user_degree_;
  std::vector<Weight> community_degree_;
  std::unordered_set<std::uint64_t> present_;
  std::vector<std::size_t> queue_;
  std::size_t cursor_ = 0;
  std::size_t pass_accepted_ = 0;
  std::size_t accepted_ = 0;
  bool exhausted_ = false;
};

std::size_t swaps_for(double fraction, std::size_t edges) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "rewiring fraction must lie in [0, 1]");
  }
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(edges) - 1e-9));
}

RewiringCheckpoint measure(const BipartiteGraph& g, double target, std::size_t accepted, bool reached,
                           const RewiringOptions& options) {
  RewiringCheckpoint cp;
  cp.target_fraction = target;
  cp.accepted_swaps = accepted;
  cp.achieved_fraction = static_cast<double>(accepted) / static_cast<double>(g.num_edges());
  cp.reached = reached;
  cp.user_community = user_community_assortativity(g, options.weighted);
  const auto projected = projected_community_assortativities(g);
  cp.projected_degree = projected.degree;
  cp.projected_population = projected.population;
  cp.dauc = dauc(disruption_curve(g, removal_plan(g, options.ranking), options.weighted));
  return cp;
}

}  // namespace

Assortativity user_community_assortativity(const BipartiteGraph& g, bool weighted) {
  const auto& edges = g.edges();
  return pearson(edges.size(), [&](std::size_t i) {
    return std::pair{g.user_degree(edges[i].user, weighted), g.community_degree(edges[i].community, weighted)};
  });
}

ProjectedAssortativity projected_community_assortativities(const BipartiteGraph& g) {
  std::vector<std::uint64_t> pairs;
  std::vector<CommunityIndex> cs;
  for (UserIndex u = 0; u < g.num_users(); ++u) {
    cs.clear();
    for (const Membership& m : g.memberships(u)) cs.push_back(m.community);
    std::sort(cs.begin(), cs.end());
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.size(); ++j) pairs.push_back((static_cast<std::uint64_t>(cs[i]) << 32) | cs[j]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  ProjectedAssortativity out;
  out.projected_edges = pairs.size();
  auto oriented = [&](auto value) {
    return [&pairs, value](std::size_t i) {
      const auto a = static_cast<CommunityIndex>(pairs[i / 2] >> 32);
      const auto b = static_cast<CommunityIndex>(pairs[i / 2] & 0xFFFFFFFFu);
      return i % 2 == 0 ? std::pair{value(a), value(b)} : std::pair{value(b), value(a)};
    };
  };
  out.degree = pearson(2 * pairs.size(), oriented([&g](CommunityIndex c) { return g.community_weighted_degree(c); }));
  out.population = pearson(2 * pairs.size(), oriented([&g](CommunityIndex c) {
                             return static_cast<Weight>(g.community_unique_degree(c));
                           }));
  return out;
}

const char* to_string(RewireDirection d) noexcept { return d == RewireDirection::Increase ? "increase" : "decrease"; }

RewireDirection parse_direction(const std::string& text) {
  if (text == "increase") return RewireDirection::Increase;
  if (text == "decrease") return RewireDirection::Decrease;
  throw Error(ErrorCode::InvalidArgument, "unknown direction '" + text + "' (expected increase|decrease)");
}

bool RewiringTrace::complete() const {
  return std::all_of(checkpoints.begin(), checkpoints.end(), [](const auto& c) { return c.reached; });
}

RewireResult rewire(const BipartiteGraph& g, RewireDirection direction, double target_fraction, std::uint64_t seed,
                    const RewiringOptions& options) {
  if (g.num_edges() < 2) throw Error(ErrorCode::InvalidArgument, "rewiring needs at least 2 edges");
  Rewirer rewirer(g, direction, seed, options);
  const bool reached = rewirer.advance_to(swaps_for(target_fraction, g.num_edges()));
  RewireResult out{rewirer.graph(), RewiringTrace{direction, seed, {}}};
  out.trace.checkpoints.push_back(measure(out.graph, target_fraction, rewirer.accepted(), reached, options));
  return out;
}

RewiringTrace rewiring_sweep(const BipartiteGraph& g, RewireDirection direction, const std::vector<double>& fractions,
                             std::uint64_t seed, const RewiringOptions& options) {
  if (g.num_edges() < 2) throw Error(ErrorCode::InvalidArgument, "rewiring needs at least 2 edges");
  if (!std::is_sorted(fractions.begin(), fractions.end())) {
    throw Error(ErrorCode::InvalidArgument, "rewiring fractions must be sorted ascending");
  }
  Rewirer rewirer(g, direction, seed, options);
  RewiringTrace trace{direction, seed, {}};
  for (double f : fractions) {
    const bool reached = rewirer.advance_to(swaps_for(f, g.num_edges()));
    trace.checkpoints.push_back(measure(rewirer.graph(), f, rewirer.accepted(), reached, options));
  }
  return trace;
}

}  // namespace disruption
