#include "disruption/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "disruption/generators.hpp"
#include "disruption/parallel.hpp"
#include "disruption/random.hpp"

namespace disruption {

namespace {

double sum(const Pmf& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

// Column sums and suffix sums over rows (n' >= n) of the joint matrix.
struct JointSums {
  Eigen::VectorXd row;
  Eigen::VectorXd col;
  Eigen::MatrixXd tail;  // tail(n, m) = sum_{n' >= n} P(n', m)
};

JointSums joint_sums(const Eigen::MatrixXd& joint) {
  JointSums s;
  s.row = joint.rowwise().sum();
  s.col = joint.colwise().sum().transpose();
  s.tail = Eigen::MatrixXd::Zero(joint.rows() + 1, joint.cols());
  for (Eigen::Index n = joint.rows(); n-- > 0;) s.tail.row(n) = s.tail.row(n + 1) + joint.row(n);
  return s;
}

double u_from_sums(const JointDegreeModel& model, const JointSums& s, std::size_t n) {
  const auto row = static_cast<Eigen::Index>(n);
  if (s.row(row) <= 0.0) return 0.0;
  double u = 0.0;
  for (Eigen::Index m = 1; m < model.joint.cols(); ++m) {
    const double p = model.joint(row, m);
    if (p <= 0.0 || s.col(m) <= 0.0) continue;
    const double larger = s.tail(row, m) / s.col(m);
    u += (p / s.row(row)) * std::pow(larger, static_cast<double>(m - 1));
  }
  return std::clamp(u, 0.0, 1.0);
}

void check_model(const JointDegreeModel& model) {
  if (model.size_pmf.empty() || model.degree_pmf.empty() ||
      model.joint.rows() != static_cast<Eigen::Index>(model.size_pmf.size()) ||
      model.joint.cols() != static_cast<Eigen::Index>(model.degree_pmf.size())) {
    throw Error(ErrorCode::InvalidArgument, "joint matrix shape does not match its marginals");
  }
}

std::vector<std::size_t> support(const Pmf& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) out.push_back(i);
  }
  return out;
}

}  // namespace

Pmf normalized_pmf(const Pmf& pmf, const char* what) {
  if (pmf.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty distribution");
  for (double v : pmf) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": negative or non-finite probability");
    }
  }
  if (pmf[0] != 0.0) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": mass at 0 is not allowed");
  const double total = sum(pmf);
  if (total <= 0.0) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": all-zero distribution");
  Pmf out(pmf);
  for (double& v : out) v /= total;
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return out;
}

Pmf edge_weighted(const Pmf& pmf) {
  Pmf out(pmf.size());
  for (std::size_t i = 0; i < pmf.size(); ++i) out[i] = static_cast<double>(i) * pmf[i];
  const double total = sum(out);
  for (double& v : out) v /= total;
  return out;
}

Pmf truncated_binomial(std::size_t trials, double prob) {
  if (trials == 0 || !(prob > 0.0) || prob > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "binomial needs trials >= 1 and prob in (0, 1]");
  }
  Pmf p(trials + 1, 0.0);
  const double t = static_cast<double>(trials);
  for (std::size_t k = 1; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    double logp = std::lgamma(t + 1) - std::lgamma(kk + 1) - std::lgamma(t - kk + 1) + kk * std::log(prob);
    if (prob < 1.0) logp += (t - kk) * std::log1p(-prob);
    else if (k < trials) continue;
    p[k] = std::exp(logp);
  }
  const double total = sum(p);
  for (double& v : p) v /= total;

  // Trim each tail while the dropped mass stays within half the budget.
  constexpr double kBudget = 0.5e-9;
  double dropped = 0.0;
  for (std::size_t k = 1; k < p.size() && dropped + p[k] <= kBudget; ++k) {
    dropped += p[k];
    p[k] = 0.0;
  }
  dropped = 0.0;
  while (p.size() > 2 && dropped + p.back() <= kBudget) {
    dropped += p.back();
    p.pop_back();
  }
  return normalized_pmf(p, "binomial");
}

Marginals er_like_marginals(double ratio, double mean_memberships, std::size_t trials) {
  if (!(ratio > 0.0) || !(mean_memberships > 0.0) || trials == 0 ||
      mean_memberships > static_cast<double>(trials)) {
    throw Error(ErrorCode::InvalidArgument, "ER-like marginals need ratio > 0 and 0 < mean <= trials");
  }
  const double prob = mean_memberships / static_cast<double>(trials);
  const auto size_trials = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(trials)));
  return {truncated_binomial(size_trials, prob), truncated_binomial(trials, prob)};
}

JointDegreeModel random_joint(const Pmf& size_pmf, const Pmf& degree_pmf) {
  JointDegreeModel model;
  model.size_pmf = normalized_pmf(size_pmf, "size distribution");
  model.degree_pmf = normalized_pmf(degree_pmf, "degree distribution");
  const Pmf a = edge_weighted(model.size_pmf);
  const Pmf b = edge_weighted(model.degree_pmf);
  const Eigen::Map<const Eigen::VectorXd> va(a.data(), static_cast<Eigen::Index>(a.size()));
  const Eigen::Map<const Eigen::VectorXd> vb(b.data(), static_cast<Eigen::Index>(b.size()));
  model.joint = va * vb.transpose();
  model.joint /= model.joint.sum();
  return model;
}

JointDegreeModel extreme_joint(const Pmf& size_pmf, const Pmf& degree_pmf, Extreme which) {
  JointDegreeModel model;
  model.size_pmf = normalized_pmf(size_pmf, "size distribution");
  model.degree_pmf = normalized_pmf(degree_pmf, "degree distribution");
  const Pmf a = edge_weighted(model.size_pmf);
  const Pmf b = edge_weighted(model.degree_pmf);
  model.joint = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));

  auto rows = support(a);
  auto cols = support(b);
  std::reverse(rows.begin(), rows.end());
  if (which == Extreme::Max) std::reverse(cols.begin(), cols.end());

  constexpr double kEps = 1e-15;
  std::size_t i = 0, j = 0;
  double ra = a[rows[0]], rb = b[cols[0]];
  while (i < rows.size() && j < cols.size()) {
    const double mass = std::min(ra, rb);
    model.joint(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j])) += mass;
    ra -= mass;
    rb -= mass;
    if (ra <= kEps && ++i < rows.size()) ra = a[rows[i]];
    if (rb <= kEps && ++j < cols.size()) rb = b[cols[j]];
  }
  model.joint /= model.joint.sum();
  return model;
}

JointDegreeModel interpolate(const JointDegreeModel& base, const JointDegreeModel& target, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1]");
  check_model(base);
  check_model(target);
  if (base.joint.rows() != target.joint.rows() || base.joint.cols() != target.joint.cols()) {
    throw Error(ErrorCode::InvalidArgument, "cannot interpolate joint matrices of different shape");
  }
  JointDegreeModel out = base;
  out.joint = (1.0 - rho) * base.joint + rho * target.joint;
  return out;
}

double joint_correlation(const JointDegreeModel& model) {
  check_model(model);
  double en = 0, em = 0, enn = 0, emm = 0, enm = 0;
  for (Eigen::Index n = 0; n < model.joint.rows(); ++n) {
    for (Eigen::Index m = 0; m < model.joint.cols(); ++m) {
      const double p = model.joint(n, m);
      const double dn = static_cast<double>(n), dm = static_cast<double>(m);
      en += p * dn;
      em += p * dm;
      enn += p * dn * dn;
      emm += p * dm * dm;
      enm += p * dn * dm;
    }
  }
  const double vn = enn - en * en, vm = emm - em * em;
  if (vn <= 1e-300 || vm <= 1e-300) return 0.0;
  return (enm - en * em) / std::sqrt(vn * vm);
}

double u_n(const JointDegreeModel& model, std::size_t n) {
  check_model(model);
  if (n >= model.size_pmf.size() || model.size_pmf[n] <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "size " + std::to_string(n) + " is outside the support of p_n");
  }
  return u_from_sums(model, joint_sums(model.joint), n);
}

std::vector<AnalyticPoint> analytic_disruption(const JointDegreeModel& model) {
  check_model(model);
  const JointSums sums = joint_sums(model.joint);
  std::vector<AnalyticPoint> out;
  double cumulative = 0.0;  // sum_{n' <= n} n' p_n'
  for (std::size_t n = 1; n < model.size_pmf.size(); ++n) {
    const double pn = model.size_pmf[n];
    const double edges = static_cast<double>(n) * pn;
    cumulative += edges;
    if (pn <= 0.0) continue;
    AnalyticPoint pt;
    pt.n = n;
    pt.u = u_from_sums(model, sums, n);
    pt.numerator = edges - pt.u * edges;
    pt.denominator = cumulative - pt.u * edges;
    if (pt.numerator <= 0.0) {
      pt.numerator = 0.0;
      pt.disruption = 0.0;
    } else if (pt.denominator <= 0.0) {
      pt.defined = false;
    } else {
      pt.disruption = std::clamp(pt.numerator / pt.denominator, 0.0, 1.0);
    }
    out.push_back(pt);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<CorrelationPoint> correlation_experiment(const Pmf& size_pmf, const Pmf& degree_pmf, double rho,
                                                     CorrelationDirection direction) {
  const auto rand = random_joint(size_pmf, degree_pmf);
  const auto extreme =
      extreme_joint(size_pmf, degree_pmf, direction == CorrelationDirection::TowardMax ? Extreme::Max : Extreme::Min);
  const auto corr = interpolate(rand, extreme, rho);
  const auto base = analytic_disruption(rand);
  const auto moved = analytic_disruption(corr);
  std::vector<CorrelationPoint> out;
  out.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CorrelationPoint pt;
    pt.n = base[i].n;
    pt.random = base[i].disruption;
    pt.correlated = moved[i].disruption;
    pt.defined = base[i].defined && moved[i].defined && pt.random > 0.0;
    pt.relative = pt.defined ? pt.correlated / pt.random - 1.0 : 0.0;
    out.push_back(pt);
  }
  return out;
}

BipartiteGraph sample_finite_network(const JointDegreeModel& model, std::size_t communities, std::uint64_t seed) {
  check_model(model);
  if (communities == 0) throw Error(ErrorCode::InvalidArgument, "need at least one community");
  Rng rng = make_rng(seed);

  std::discrete_distribution<std::size_t> draw_size(model.size_pmf.begin(), model.size_pmf.end());
  std::discrete_distribution<std::size_t> draw_degree(model.degree_pmf.begin(), model.degree_pmf.end());

  std::vector<std::size_t> sizes(communities);
  std::size_t stubs = 0;
  for (auto& s : sizes) {
    s = draw_size(rng);
    stubs += s;
  }
  std::vector<std::size_t> degrees;
  for (std::size_t have = 0; have < stubs;) {
    std::size_t m = draw_degree(rng);
    if (have + m > stubs) m = stubs - have;
    degrees.push_back(m);
    have += m;
  }

  const auto num_m = static_cast<std::size_t>(model.joint.cols());
  const Eigen::VectorXd col = model.joint.colwise().sum().transpose();
  // affinity(n, m) = P(n, m) / P(., m): proportional to P(m | n) once scaled
  // by the remaining stubs of class m.
  Eigen::MatrixXd affinity = Eigen::MatrixXd::Zero(model.joint.rows(), model.joint.cols());
  for (Eigen::Index m = 0; m < model.joint.cols(); ++m) {
    if (col(m) > 0.0) affinity.col(m) = model.joint.col(m) / col(m);
  }

  std::vector<CommunityIndex> order(communities);
  std::iota(order.begin(), order.end(), CommunityIndex{0});

  constexpr int kRestarts = 8;
  constexpr int kAttempts = 64;
  std::vector<Edge> edges;
  std::vector<double> weights(num_m);
  for (int restart = 0; restart < kRestarts; ++restart) {
    std::vector<std::vector<UserIndex>> pool(num_m);
    for (std::size_t u = 0; u < degrees.size(); ++u) {
      for (std::size_t k = 0; k < degrees[u]; ++k) pool[degrees[u]].push_back(static_cast<UserIndex>(u));
    }
    std::shuffle(order.begin(), order.end(), rng);
    edges.clear();
    edges.reserve(stubs);
    bool stuck = false;
    std::vector<UserIndex> members;
    for (CommunityIndex c : order) {
      const std::size_t n = sizes[c];
      members.clear();
      for (std::size_t k = 0; k < n && !stuck; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
          double total = 0.0;
          for (std::size_t m = 1; m < num_m; ++m) {
            weights[m] = affinity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) *
                         static_cast<double>(pool[m].size());
            total += weights[m];
          }
          if (total <= 0.0) {
            for (std::size_t m = 1; m < num_m; ++m) weights[m] = static_cast<double>(pool[m].size());
          }
          weights[0] = 0.0;
          std::discrete_distribution<std::size_t> draw_class(weights.begin(), weights.end());
          auto& bucket = pool[draw_class(rng)];
          std::uniform_int_distribution<std::size_t> pick(0, bucket.size() - 1);
          const std::size_t slot = pick(rng);
          const UserIndex user = bucket[slot];
          if (std::find(members.begin(), members.end(), user) != members.end()) continue;
          bucket[slot] = bucket.back();
          bucket.pop_back();
          members.push_back(user);
          edges.push_back({user, c, 1});
          placed = true;
        }
        stuck = !placed;
      }
      if (stuck) break;
    }
    if (!stuck) {
      std::vector<std::string> user_ids(degrees.size());
      std::vector<std::string> community_ids(communities);
      for (std::size_t u = 0; u < degrees.size(); ++u) user_ids[u] = padded_id("u", u, degrees.size());
      for (std::size_t c = 0; c < communities; ++c) community_ids[c] = padded_id("c", c, communities);
      return BipartiteGraph::from_indexed(std::move(user_ids), std::move(community_ids), edges);
    }
  }
  throw Error(ErrorCode::Infeasible, "could not wire stubs without duplicate edges after " +
                                         std::to_string(kRestarts) + " attempts");
}

std::map<std::size_t, SizeClassDisruption> size_class_disruption(const BipartiteGraph& g) {
  std::size_t max_size = 0;
  for (CommunityIndex c = 0; c < g.num_communities(); ++c) max_size = std::max(max_size, g.community_unique_degree(c));

  std::vector<std::size_t> smallest(g.num_users(), max_size + 1);
  for (const Edge& e : g.edges()) smallest[e.user] = std::min(smallest[e.user], g.community_unique_degree(e.community));

  // survivor_edges for class n counts edges with size <= n whose user has a
  // community smaller than n: a range update over n in [max(size, smallest + 1), max].
  std::vector<std::int64_t> cut(max_size + 2, 0), diff(max_size + 2, 0);
  std::vector<std::size_t> count(max_size + 1, 0);
  for (CommunityIndex c = 0; c < g.num_communities(); ++c) ++count[g.community_unique_degree(c)];
  for (const Edge& e : g.edges()) {
    const std::size_t s = g.community_unique_degree(e.community);
    const std::size_t mu = smallest[e.user];
    if (mu < s) ++cut[s];
    ++diff[std::max(s, mu + 1)];
  }

  std::map<std::size_t, SizeClassDisruption> out;
  std::int64_t running = 0;
  for (std::size_t n = 1; n <= max_size; ++n) {
    running += diff[n];
    if (count[n] == 0) continue;
    SizeClassDisruption d;
    d.n = n;
    d.communities = count[n];
    d.cut_edges = cut[n];
    d.survivor_edges = running;
    if (d.cut_edges == 0) d.disruption = 0.0;
    else if (d.survivor_edges == 0) d.defined = false;
    else d.disruption = static_cast<double>(d.cut_edges) / static_cast<double>(d.survivor_edges);
    out.emplace(n, d);
  }
  return out;
}

Eigen::MatrixXd edge_class_histogram(const BipartiteGraph& g, std::size_t max_size, std::size_t max_degree) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(max_size + 1),
                                            static_cast<Eigen::Index>(max_degree + 1));
  for (const Edge& e : g.edges()) {
    const std::size_t n = g.community_unique_degree(e.community);
    const std::size_t m = g.user_membership_count(e.user);
    if (n <= max_size && m <= max_degree) h(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) += 1.0;
  }
  if (!g.empty()) h /= static_cast<double>(g.num_edges());
  return h;
}

ValidationReport validate_against_samples(const JointDegreeModel& model, std::size_t communities, std::size_t runs,
                                          std::uint64_t seed) {
  if (runs == 0) throw Error(ErrorCode::InvalidArgument, "validation needs at least one run");
  std::vector<std::map<std::size_t, SizeClassDisruption>> samples(runs);
  parallel_for(runs, [&](std::size_t r) {
    samples[r] = size_class_disruption(sample_finite_network(model, communities, derive_seed(seed, r)));
  });

  ValidationReport report;
  report.runs = runs;
  for (const AnalyticPoint& pt : analytic_disruption(model)) {
    if (!pt.defined) continue;
    std::vector<double> values;
    for (const auto& s : samples) {
      auto it = s.find(pt.n);
      if (it != s.end() && it->second.defined) values.push_back(it->second.disruption);
    }
    ValidationClass vc;
    vc.n = pt.n;
    vc.analytic = pt.disruption;
    vc.runs_present = values.size();
    if (values.empty()) {
      report.classes.push_back(vc);
      continue;
    }
    const double k = static_cast<double>(values.size());
    vc.mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
    double ss = 0.0;
    for (double v : values) ss += (v - vc.mean) * (v - vc.mean);
    const double sd = values.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
    vc.half_width = 1.96 * sd / std::sqrt(k);
    vc.within = std::abs(vc.mean - vc.analytic) <= vc.half_width;
    report.classes.push_back(vc);
  }
  std::reverse(report.classes.begin(), report.classes.end());
  return report;
}

}  // namespace disruption
