#pragma once

// Oracles for the Dirichlet-process layer: the fresh-cluster marginals by
// quadrature of their defining integrals, and exhaustive partition laws for
// tiny n that a reassignment chain must reproduce.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "dpvs/dp_variance.hpp"
#include "oracles.hpp"

namespace dpvs::testing {

/// int N(r; 0, s) IG(s; b1, b2) ds by quadrature.
inline double gaussian_g_oracle(double r, double b1, double b2) {
  const double mode = (0.5 * r * r + b2) / (b1 + 0.5);
  return integrate_positive([&](double s) { return lpdf_normal(r, 0.0, s) + lpdf_inv_gamma(s, b1, b2); }, mode);
}

/// int Gamma(G; nu/2, rate nu s/2) Gamma(s; b1, b2) ds by quadrature.
inline double student_g_oracle(double G, double nu, double b1, double b2) {
  const double mode = (0.5 * nu + b1) / (0.5 * nu * G + b2);
  return integrate_positive(
      [&](double s) { return lpdf_gamma(G, 0.5 * nu, 0.5 * nu * s) + lpdf_gamma(s, b1, b2); }, mode);
}

struct GridResult {
  std::size_t points = 0;
  double max_rel_error = 0.0;
};

inline GridResult gaussian_g_grid() {
  GridResult out;
  for (double r : {0.0, 0.3, 1.0, 3.0, 10.0})
    for (double b1 : {0.5, 1.0, 2.01, 5.0, 20.0})
      for (double b2 : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double want = gaussian_g_oracle(r, b1, b2);
        out.max_rel_error = std::max(out.max_rel_error, std::abs(marginal_g_gaussian(r, b1, b2) - want) / want);
        ++out.points;
      }
  return out;
}

inline GridResult student_g_grid() {
  GridResult out;
  for (double nu : {1.0, 2.0, 5.0})
    for (double G : {0.05, 0.3, 1.0, 3.0, 20.0})
      for (double b1 : {0.5, 1.0, 2.01, 5.0, 20.0})
        for (double b2 : {0.1, 0.5, 1.0, 2.0, 10.0}) {
          const double want = student_g_oracle(G, nu, b1, b2);
          out.max_rel_error = std::max(out.max_rel_error, std::abs(marginal_g_student(G, nu, b1, b2) - want) / want);
          ++out.points;
        }
  return out;
}

using Partition = std::vector<std::size_t>;

/// Reassignment chain with constant likelihood terms: its stationary law is CRP(alpha).
inline double crp_prior_tv(std::size_t n, double alpha, std::size_t sweeps, std::uint64_t seed) {
  RngStream rng(seed, 41);
  ClusterState state(n, 1.0, alpha);
  std::map<Partition, double> counts;
  for (std::size_t t = 0; t < sweeps; ++t) {
    for (std::size_t i = 0; i < n; ++i)
      reassign_observation(i, state, [](double) { return 0.0; }, 0.0, [](RngStream&) { return 1.0; }, rng);
    counts[canonical(state.assignments())] += 1.0;
  }
  std::map<Partition, double> probs;
  for (const auto& part : all_partitions(n)) probs[part] = crp_probability(part, alpha);
  return tv_discrete(counts, probs);
}

/// Exact partition law: CRP(alpha) times the product of per-cluster marginal
/// likelihoods, each computed by quadrature over the cluster variance.
template <class ClusterLogLik, class BaseLogDensity>
std::map<Partition, double> partition_oracle(std::size_t n, double alpha, ClusterLogLik&& loglik,
                                             BaseLogDensity&& base, double center) {
  std::map<Partition, double> w;
  double total = 0.0;
  for (const auto& part : all_partitions(n)) {
    double v = crp_probability(part, alpha);
    std::size_t K = 0;
    for (auto c : part) K = std::max(K, c + 1);
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (part[i] == k) members.push_back(i);
      v *= integrate_positive([&](double s) { return loglik(members, s) + base(s); }, center);
    }
    w[part] = v;
    total += v;
  }
  for (auto& [k, v] : w) v /= total;
  return w;
}

/// n-observation Gaussian toy at fixed residuals; instantiated cluster variances.
inline double gaussian_partition_tv(const std::vector<double>& r, double alpha, std::size_t sweeps,
                                    std::uint64_t seed, DpHyper h = {}) {
  const std::size_t n = r.size();
  RngStream rng(seed, 42);
  ClusterState state(n, 1.0, alpha, h);
  const Eigen::VectorXd res = Eigen::Map<const Eigen::VectorXd>(r.data(), Eigen::Index(n));
  std::map<Partition, double> counts;
  for (std::size_t t = 0; t < sweeps; ++t) {
    for (std::size_t i = 0; i < n; ++i) reassign_gaussian(i, r[i], state, rng);
    update_cluster_vars_gaussian(state, res, rng);
    counts[canonical(state.assignments())] += 1.0;
  }
  auto loglik = [&](const std::vector<std::size_t>& members, double s) {
    double v = 0.0;
    for (auto i : members) v += lpdf_normal(r[i], 0.0, s);
    return v;
  };
  auto base = [&](double s) { return lpdf_inv_gamma(s, h.b1, h.b2); };
  return tv_discrete(counts, partition_oracle(n, alpha, loglik, base, 1.0));
}

/// Student-t toy at fixed latent precisions.
inline double student_partition_tv(const std::vector<double>& G, double nu, double alpha, std::size_t sweeps,
                                   std::uint64_t seed, DpHyper h = {}) {
  const std::size_t n = G.size();
  RngStream rng(seed, 43);
  ClusterState state(n, 1.0, alpha, h);
  const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(G.data(), Eigen::Index(n));
  std::map<Partition, double> counts;
  for (std::size_t t = 0; t < sweeps; ++t) {
    for (std::size_t i = 0; i < n; ++i) reassign_student(i, G[i], nu, state, rng);
    update_cluster_vars_student(state, g, nu, rng);
    counts[canonical(state.assignments())] += 1.0;
  }
  auto loglik = [&](const std::vector<std::size_t>& members, double s) {
    double v = 0.0;
    for (auto i : members) v += lpdf_gamma(G[i], 0.5 * nu, 0.5 * nu * s);
    return v;
  };
  auto base = [&](double s) { return lpdf_gamma(s, h.b1, h.b2); };
  return tv_discrete(counts, partition_oracle(n, alpha, loglik, base, 1.0));
}

}  // namespace dpvs::testing
