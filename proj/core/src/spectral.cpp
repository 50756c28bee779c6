#include "disruption/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "disruption/random.hpp"

namespace disruption {

namespace {

struct Component {
  std::vector<std::size_t> label;  // root per vertex (users first, then communities)
  std::size_t root = 0;
  std::size_t size = 0;
  std::size_t count = 0;
};

Component components(const BipartiteGraph& g) {
  const std::size_t nu = g.num_users();
  std::vector<std::size_t> parent(nu + g.num_communities());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    const auto a = find(e.user), b = find(nu + e.community);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Component out;
  out.label.resize(parent.size());
  std::vector<std::size_t> size(parent.size(), 0);
  for (std::size_t v = 0; v < parent.size(); ++v) {
    out.label[v] = find(v);
    if (size[out.label[v]]++ == 0) ++out.count;
  }
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (size[v] > out.size) {
      out.size = size[v];
      out.root = v;
    }
  }
  return out;
}

// Symmetric normalised Laplacian of the user+community adjacency.
class NormalizedLaplacian {
 public:
  NormalizedLaplacian(const BipartiteGraph& g, bool weighted) : nu_(g.num_users()) {
    const std::size_t n = g.num_users() + g.num_communities();
    offsets_.assign(n + 1, 0);
    for (const Edge& e : g.edges()) {
      ++offsets_[e.user + 1];
      ++offsets_[nu_ + e.community + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    targets_.resize(2 * g.num_edges());
    weights_.resize(2 * g.num_edges());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    degree_.assign(n, 0.0);
    for (const Edge& e : g.edges()) {
      const double w = weighted ? static_cast<double>(e.weight) : 1.0;
      const std::size_t a = e.user, b = nu_ + e.community;
      targets_[fill[a]] = b;
      weights_[fill[a]++] = w;
      targets_[fill[b]] = a;
      weights_[fill[b]++] = w;
      degree_[a] += w;
      degree_[b] += w;
    }
    inv_sqrt_.resize(static_cast<Eigen::Index>(n));
    null_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      inv_sqrt_(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(degree_[i]);
      null_(static_cast<Eigen::Index>(i)) = std::sqrt(degree_[i]);
    }
    null_.normalize();
  }

  Eigen::Index size() const { return inv_sqrt_.size(); }
  const Eigen::VectorXd& null_vector() const { return null_; }

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    const Eigen::VectorXd scaled = x.cwiseProduct(inv_sqrt_);
    y.resize(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double acc = 0.0;
      for (std::size_t k = offsets_[static_cast<std::size_t>(i)]; k < offsets_[static_cast<std::size_t>(i) + 1]; ++k) {
        acc += weights_[k] * scaled(static_cast<Eigen::Index>(targets_[k]));
      }
      y(i) = x(i) - inv_sqrt_(i) * acc;
    }
  }

 private:
  std::size_t nu_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
  std::vector<double> degree_;
  Eigen::VectorXd inv_sqrt_;
  Eigen::VectorXd null_;
};

// Removes components along the deflated null vector and the first `cols`
// basis columns, twice (classical Gram-Schmidt with reorthogonalisation).
// Returns the accumulated projection coefficients.
Eigen::VectorXd orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Eigen::Index cols,
                              const Eigen::VectorXd& null) {
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(cols);
  for (int pass = 0; pass < 2; ++pass) {
    w -= null * null.dot(w);
    if (cols > 0) {
      const Eigen::VectorXd h = basis.leftCols(cols).transpose() * w;
      w -= basis.leftCols(cols) * h;
      coeff += h;
    }
  }
  return coeff;
}

double solve_lambda2(const NormalizedLaplacian& op, const SpectralOptions& options, std::size_t& restarts,
                     double& residual) {
  const Eigen::Index n = op.size();
  const Eigen::Index kmax = std::max<Eigen::Index>(
      1, std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(options.krylov_dimension)));
  const Eigen::VectorXd& null = op.null_vector();

  Eigen::MatrixXd basis(n, kmax + 1);
  Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(kmax, kmax);

  Rng rng = make_rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  orthogonalize(v, basis, 0, null);
  basis.col(0) = v.normalized();

  Eigen::Index kept = 0;  // columns carried over from the previous cycle
  Eigen::VectorXd w(n), y(n), ly(n);
  residual = std::numeric_limits<double>::infinity();
  for (restarts = 0; restarts <= options.max_restarts; ++restarts) {
    Eigen::Index m = kept;
    bool invariant = false;
    for (; m < kmax; ++m) {
      op.apply(basis.col(m), w);
      const Eigen::VectorXd h = orthogonalize(w, basis, m + 1, null);
      projected.block(0, m, m + 1, 1) = h;
      projected.block(m, 0, 1, m + 1) = h.transpose();
      const double beta = w.norm();
      if (beta < 1e-12) {
        invariant = true;
        ++m;
        break;
      }
      basis.col(m + 1) = w / beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected.topLeftCorner(m, m));
    const double theta = ritz.eigenvalues()(0);
    y = basis.leftCols(m) * ritz.eigenvectors().col(0);
    y.normalize();
    op.apply(y, ly);
    residual = (ly - theta * y).norm();
    if (residual <= options.tolerance || invariant) return theta;

    // Thick restart: keep the smallest Ritz vectors and continue the Krylov
    // expansion from the last basis vector.
    const Eigen::Index keep = std::max<Eigen::Index>(1, std::min<Eigen::Index>(kmax / 2, m - 1));
    const Eigen::VectorXd next = basis.col(m);
    const Eigen::MatrixXd retained = basis.leftCols(m) * ritz.eigenvectors().leftCols(keep);
    basis.leftCols(keep) = retained;
    projected.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) projected(i, i) = ritz.eigenvalues()(i);
    basis.col(keep) = next;
    kept = keep;
  }
  throw ConvergenceError("lambda2 did not converge; achieved residual " + std::to_string(residual), residual);
}

}  // namespace

BipartiteGraph largest_component(const BipartiteGraph& g) {
  const Component comp = components(g);
  if (comp.count <= 1) return g;
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (comp.label[e.user] == comp.root) edges.push_back(e);
  }
  return BipartiteGraph::from_indexed(g.user_ids(), g.community_ids(), edges);
}

Lambda2Result lambda2(const BipartiteGraph& g, const SpectralOptions& options) {
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "lambda2 of an empty graph");
  Lambda2Result result;
  const Component comp = components(g);
  const BipartiteGraph giant = comp.count > 1 ? largest_component(g) : BipartiteGraph{};
  const BipartiteGraph& target = comp.count > 1 ? giant : g;
  result.restricted_to_giant_component = comp.count > 1;
  result.component_vertices = target.num_users() + target.num_communities();

  const NormalizedLaplacian op(target, options.weighted);
  result.value = solve_lambda2(op, options, result.restarts, result.residual);
  return result;
}

CheegerEstimate cheeger_bounds(const BipartiteGraph& g, const SpectralOptions& options) {
  const Lambda2Result l2 = lambda2(g, options);
  CheegerEstimate est;
  est.lambda2 = std::max(0.0, l2.value);
  est.lower = est.lambda2 / 2.0;
  est.upper = std::sqrt(2.0 * est.lambda2);
  est.restricted_to_giant_component = l2.restricted_to_giant_component;
  if (l2.component_vertices <= kBruteForceVertexLimit) {
    est.exact = brute_force_cheeger(l2.restricted_to_giant_component ? largest_component(g) : g, options.weighted);
  }
  return est;
}

double brute_force_cheeger(const BipartiteGraph& g, bool weighted) {
  const std::size_t nu = g.num_users();
  const std::size_t n = nu + g.num_communities();
  if (n > kBruteForceVertexLimit) {
    throw Error(ErrorCode::TooLarge, "brute-force Cheeger is limited to " + std::to_string(kBruteForceVertexLimit) +
                                         " vertices, graph has " + std::to_string(n));
  }
  if (g.empty()) throw Error(ErrorCode::EmptyGraph, "Cheeger number of an empty graph");

  std::vector<std::vector<std::pair<std::size_t, Weight>>> adj(n);
  for (const Edge& e : g.edges()) {
    const Weight w = weighted ? e.weight : 1;
    adj[e.user].emplace_back(nu + e.community, w);
    adj[nu + e.community].emplace_back(e.user, w);
  }

  // Gray-code walk over all subsets; each step toggles one vertex and updates
  // the boundary and incident weights from its edges.
  std::uint32_t in = 0;
  Weight cut = 0, incident = 0;
  Weight best_cut = 1, best_incident = 0;  // best_incident == 0 marks "none yet"
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto v = static_cast<std::size_t>(std::countr_zero(i));
    const std::uint32_t bit = std::uint32_t{1} << v;
    const bool adding = (in & bit) == 0;
    for (const auto& [x, w] : adj[v]) {
      const bool other_in = (in >> x) & 1u;
      if (adding) {
        if (other_in) cut -= w;
        else {
          cut += w;
          incident += w;
        }
      } else {
        if (other_in) cut += w;
        else {
          cut -= w;
          incident -= w;
        }
      }
    }
    in ^= bit;
    const auto members = static_cast<std::size_t>(std::popcount(in));
    if (members == 0 || 2 * members > n || incident == 0) continue;
    if (best_incident == 0 || cut * best_incident < best_cut * incident) {
      best_cut = cut;
      best_incident = incident;
    }
  }
  return static_cast<double>(best_cut) / static_cast<double>(best_incident);
}

}  // namespace disruption
