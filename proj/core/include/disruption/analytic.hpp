#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "disruption/graph.hpp"

namespace disruption {

/// Probability mass over a finite support; index i holds P(value = i).
using Pmf = std::vector<double>;

/// Random bipartite ensemble fixed by its community-size distribution p_n,
/// its memberships-per-user distribution g_m and the joint distribution
/// P(n, m) of community size and user degree at the two ends of a random edge.
struct JointDegreeModel {
  Pmf size_pmf;            // p_n, index n
  Pmf degree_pmf;          // g_m, index m
  Eigen::MatrixXd joint;   // rows n, cols m, sums to 1

  std::size_t max_size() const { return size_pmf.size() - 1; }
  std::size_t max_degree() const { return degree_pmf.size() - 1; }
};

/// Throws InvalidArgument unless the pmf is non-negative, has no mass at 0 and
/// is not all zero. Returns a normalised copy.
Pmf normalized_pmf(const Pmf& pmf, const char* what);

/// Size-biased (edge-end) marginal: i * pmf[i], normalised.
Pmf edge_weighted(const Pmf& pmf);

/// Zero-truncated binomial(trials, prob), with both tails trimmed so that
/// at least 1 - 1e-9 of the mass is retained.
Pmf truncated_binomial(std::size_t trials, double prob);

/// Marginals of the ER-like setting: users per community ratio `ratio`,
/// binomial memberships per user with mean `mean_memberships` over `trials`
/// trials, and community sizes binomial over ratio * trials trials.
struct Marginals {
  Pmf size_pmf;
  Pmf degree_pmf;
};
Marginals er_like_marginals(double ratio, double mean_memberships, std::size_t trials);

/// P_rand(n, m) proportional to n p_n * m g_m.
JointDegreeModel random_joint(const Pmf& size_pmf, const Pmf& degree_pmf);

enum class Extreme { Max, Min };

/// Monotone mass coupling of the edge-weighted marginals: largest sizes are
/// paired with the largest (Max) or smallest (Min) user degrees first.
JointDegreeModel extreme_joint(const Pmf& size_pmf, const Pmf& degree_pmf, Extreme which);

/// (1 - rho) * base + rho * target, same marginals.
JointDegreeModel interpolate(const JointDegreeModel& base, const JointDegreeModel& target, double rho);

/// Pearson correlation of (n, m) under the joint distribution.
double joint_correlation(const JointDegreeModel& model);

/// Probability that a random member of a size-n community has no smaller
/// community. Throws InvalidArgument when p_n = 0.
double u_n(const JointDegreeModel& model, std::size_t n);

struct AnalyticPoint {
  std::size_t n = 0;
  double u = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double disruption = 0.0;
  /// False when the denominator vanishes with a non-zero numerator.
  bool defined = true;
};

/// Fraction of remaining edges disrupted when the size-n communities are
/// pruned (largest first). Points are ordered by descending n and cover every
/// size with p_n > 0.
std::vector<AnalyticPoint> analytic_disruption(const JointDegreeModel& model);

enum class CorrelationDirection { TowardMax, TowardMin };

struct CorrelationPoint {
  std::size_t n = 0;
  double random = 0.0;
  double correlated = 0.0;
  /// correlated / random - 1; 0 and undefined when random == 0.
  double relative = 0.0;
  bool defined = true;
};

std::vector<CorrelationPoint> correlation_experiment(const Pmf& size_pmf, const Pmf& degree_pmf, double rho,
                                                     CorrelationDirection direction);

/// Finite network drawn from the ensemble. Community sizes come from p_n;
/// users are drawn from g_m until the stub counts balance, with the last user
/// trimmed; stubs are wired class by class following P(n, m) and duplicate
/// pairs are rejected. Throws Infeasible after bounded retries.
BipartiteGraph sample_finite_network(const JointDegreeModel& model, std::size_t communities, std::uint64_t seed);

struct SizeClassDisruption {
  std::size_t n = 0;
  std::size_t communities = 0;
  std::int64_t cut_edges = 0;
  std::int64_t survivor_edges = 0;
  double disruption = 0.0;
  bool defined = true;
};

/// Empirical counterpart of analytic_disruption on a concrete graph (distinct
/// edges): with every community larger than n already removed, the share of
/// surviving users' remaining edges that lead into size-n communities.
std::map<std::size_t, SizeClassDisruption> size_class_disruption(const BipartiteGraph& g);

/// Empirical histogram of (community size, user degree) over edges.
Eigen::MatrixXd edge_class_histogram(const BipartiteGraph& g, std::size_t max_size, std::size_t max_degree);

struct ValidationClass {
  std::size_t n = 0;
  double analytic = 0.0;
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t runs_present = 0;
  bool within = false;
};

struct ValidationReport {
  std::size_t runs = 0;
  std::vector<ValidationClass> classes;  // ascending n
};

/// Samples `runs` networks and compares the mean empirical size-class
/// disruption against the analytic value using a normal 95% interval.
ValidationReport validate_against_samples(const JointDegreeModel& model, std::size_t communities, std::size_t runs,
                                          std::uint64_t seed);

}  // namespace disruption
