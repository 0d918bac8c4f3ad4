#pragma once

// Dirichlet-process layer over per-observation variances: partition
// bookkeeping, Polya-urn reassignment (Gaussian and Student-t kernels),
// cluster-variance refresh, the latent precisions G of the Student-t model,
// and the concentration-parameter update.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "dpvs/rand_core.hpp"

namespace dpvs {

struct DpHyper {
  double b1 = 2.01;
  double b2 = 1.0;
  double d1 = 1.0;
  double d2 = 0.5;
};

/// Partition of n observations into clusters sharing one variance.
/// Cluster ids are contiguous in [0, K); deleting a cluster moves the last
/// cluster into the freed slot.
class ClusterState {
 public:
  static constexpr std::size_t unassigned = static_cast<std::size_t>(-1);

  ClusterState() = default;

  /// All observations in one cluster with variance `initial_var`.
  ClusterState(std::size_t n, double initial_var, double alpha, DpHyper hyper = {})
      : assignments_(n, 0), alpha(alpha), hyper(hyper) {
    if (n == 0) throw std::invalid_argument("cluster state needs at least one observation");
    vars_.push_back(initial_var);
    sizes_.push_back(n);
  }

  /// Arbitrary partition; `labels` must use every id in [0, vars.size()).
  ClusterState(std::vector<std::size_t> labels, std::vector<double> vars, double alpha,
               DpHyper hyper = {})
      : assignments_(std::move(labels)), vars_(std::move(vars)), alpha(alpha), hyper(hyper) {
    sizes_.assign(vars_.size(), 0);
    for (std::size_t c : assignments_) {
      if (c >= vars_.size()) throw std::invalid_argument("cluster label out of range");
      ++sizes_[c];
    }
    for (std::size_t s : sizes_)
      if (s == 0) throw std::invalid_argument("empty cluster in initial partition");
  }

  std::size_t n() const { return assignments_.size(); }
  std::size_t num_clusters() const { return vars_.size(); }
  const std::vector<std::size_t>& assignments() const { return assignments_; }
  const std::vector<double>& distinct_vars() const { return vars_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  std::size_t cluster_of(std::size_t i) const { return assignments_[i]; }
  double variance_of(std::size_t i) const { return vars_[assignments_[i]]; }
  double& cluster_var(std::size_t k) { return vars_[k]; }

  Eigen::VectorXd per_observation_variances() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(n()));
    for (std::size_t i = 0; i < n(); ++i) out[static_cast<Eigen::Index>(i)] = variance_of(i);
    return out;
  }

  /// Removes observation i from its cluster, deleting the cluster if emptied.
  void detach(std::size_t i) {
    const std::size_t k = assignments_[i];
    assignments_[i] = unassigned;
    if (--sizes_[k] > 0) return;
    const std::size_t last = vars_.size() - 1;
    if (k != last) {
      vars_[k] = vars_[last];
      sizes_[k] = sizes_[last];
      for (auto& c : assignments_)
        if (c == last) c = k;
    }
    vars_.pop_back();
    sizes_.pop_back();
  }

  void attach(std::size_t i, std::size_t k) {
    assignments_[i] = k;
    ++sizes_[k];
  }

  std::size_t open_cluster(std::size_t i, double var) {
    vars_.push_back(var);
    sizes_.push_back(0);
    attach(i, vars_.size() - 1);
    return vars_.size() - 1;
  }

  /// Sizes match the assignment histogram, no empty clusters, all variances positive.
  bool valid() const {
    std::vector<std::size_t> hist(vars_.size(), 0);
    for (std::size_t c : assignments_) {
      if (c >= vars_.size()) return false;
      ++hist[c];
    }
    if (hist != sizes_) return false;
    for (std::size_t k = 0; k < vars_.size(); ++k)
      if (sizes_[k] == 0 || !(vars_[k] > 0.0) || !std::isfinite(vars_[k])) return false;
    return alpha > 0.0 && std::isfinite(alpha);
  }

 private:
  std::vector<std::size_t> assignments_;
  std::vector<double> vars_;
  std::vector<std::size_t> sizes_;

 public:
  double alpha = 1.0;
  DpHyper hyper;
};

// ---- marginal likelihoods of a fresh cluster -------------------------------

/// log of  int N(r; 0, s) IG(s; b1, b2) ds.
inline double log_marginal_g_gaussian(double residual, double b1, double b2) {
  return b1 * std::log(b2) - 0.5 * std::log(2.0 * std::numbers::pi) + std::lgamma(b1 + 0.5) -
         std::lgamma(b1) - (b1 + 0.5) * std::log(0.5 * residual * residual + b2);
}

inline double marginal_g_gaussian(double residual, double b1, double b2) {
  return std::exp(log_marginal_g_gaussian(residual, b1, b2));
}

/// log of  int Gamma(G; nu/2, rate nu s/2) Gamma(s; b1, b2) ds.
inline double log_marginal_g_student(double G, double nu, double b1, double b2) {
  const double h = 0.5 * nu;
  return h * std::log(h) - std::lgamma(h) + (h - 1.0) * std::log(G) + b1 * std::log(b2) -
         std::lgamma(b1) + std::lgamma(b1 + h) - (b1 + h) * std::log(b2 + h * G);
}

inline double marginal_g_student(double G, double nu, double b1, double b2) {
  return std::exp(log_marginal_g_student(G, nu, b1, b2));
}

inline double log_normal_density(double residual, double var) {
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + residual * residual / var);
}

inline double log_gamma_density(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

// ---- reassignment ----------------------------------------------------------

/// One Polya-urn reassignment of observation i. `log_lik(var)` is the log
/// kernel of i under an existing cluster variance, `log_new` the log marginal
/// of i under the base measure, and `draw_new(rng)` draws the variance of a
/// freshly opened cluster from the base-measure posterior given i alone.
template <class LogLik, class DrawNew>
void reassign_observation(std::size_t i, ClusterState& state, LogLik&& log_lik, double log_new,
                          DrawNew&& draw_new, RngStream& rng) {
  state.detach(i);
  const std::size_t existing = state.num_clusters();
  thread_local std::vector<double> log_w;
  thread_local std::vector<double> scratch;
  log_w.resize(existing + 1);
  scratch.resize(existing + 1);
  for (std::size_t c = 0; c < existing; ++c)
    log_w[c] = std::log(static_cast<double>(state.sizes()[c])) + log_lik(state.distinct_vars()[c]);
  log_w[existing] = std::log(state.alpha) + log_new;
  const std::size_t pick = sample_categorical_log(log_w, rng, scratch);
  if (pick == existing)
    state.open_cluster(i, draw_new(rng));
  else
    state.attach(i, pick);
}

inline void reassign_gaussian(std::size_t i, double residual, ClusterState& state,
                              RngStream& rng) {
  const double b1 = state.hyper.b1, b2 = state.hyper.b2;
  reassign_observation(
      i, state, [residual](double var) { return log_normal_density(residual, var); },
      log_marginal_g_gaussian(residual, b1, b2),
      [&](RngStream& r) {
        return sample_inverse_gamma(b1 + 0.5, b2 + 0.5 * residual * residual, r);
      },
      rng);
}

inline void reassign_student(std::size_t i, double G, double nu, ClusterState& state,
                             RngStream& rng) {
  const double b1 = state.hyper.b1, b2 = state.hyper.b2;
  reassign_observation(
      i, state, [G, nu](double var) { return log_gamma_density(G, 0.5 * nu, 0.5 * nu * var); },
      log_marginal_g_student(G, nu, b1, b2),
      [&](RngStream& r) { return sample_gamma(0.5 * nu + b1, 0.5 * nu * G + b2, r); }, rng);
}

// ---- cluster variances and latent precisions -------------------------------

/// sigma*2_k ~ IG(b1 + n_k/2, b2 + sum_{i in k} r_i^2 / 2).
inline void update_cluster_vars_gaussian(ClusterState& state, const Eigen::VectorXd& residuals,
                                         RngStream& rng) {
  std::vector<double> ssq(state.num_clusters(), 0.0);
  for (std::size_t i = 0; i < state.n(); ++i) {
    const double r = residuals[static_cast<Eigen::Index>(i)];
    ssq[state.cluster_of(i)] += r * r;
  }
  for (std::size_t k = 0; k < state.num_clusters(); ++k)
    state.cluster_var(k) =
        sample_inverse_gamma(state.hyper.b1 + 0.5 * static_cast<double>(state.sizes()[k]),
                             state.hyper.b2 + 0.5 * ssq[k], rng);
}

/// sigma*2_k ~ Gamma(nu n_k / 2 + b1, rate nu/2 sum_{i in k} G_i + b2).
inline void update_cluster_vars_student(ClusterState& state, const Eigen::VectorXd& G, double nu,
                                        RngStream& rng) {
  std::vector<double> sum_g(state.num_clusters(), 0.0);
  for (std::size_t i = 0; i < state.n(); ++i)
    sum_g[state.cluster_of(i)] += G[static_cast<Eigen::Index>(i)];
  for (std::size_t k = 0; k < state.num_clusters(); ++k)
    state.cluster_var(k) =
        sample_gamma(0.5 * nu * static_cast<double>(state.sizes()[k]) + state.hyper.b1,
                     0.5 * nu * sum_g[k] + state.hyper.b2, rng);
}

/// G_i ~ Gamma((nu + 1)/2, rate [r_i^2 + nu sigma2_i] / 2).
inline Eigen::VectorXd update_G(const Eigen::VectorXd& residuals,
                                const Eigen::VectorXd& sigma2_of_i, double nu, RngStream& rng) {
  Eigen::VectorXd G(residuals.size());
  for (Eigen::Index i = 0; i < residuals.size(); ++i)
    G[i] = sample_gamma(0.5 * (nu + 1.0),
                        0.5 * (residuals[i] * residuals[i] + nu * sigma2_of_i[i]), rng);
  return G;
}

// ---- concentration parameter -----------------------------------------------

/// `classical`: the Escobar-West mixture; a ~ Bernoulli(w1 / (w1 + w2)) with
/// w1 = d1 + K - 1, then alpha ~ Gamma(d1 + K - 1 + a, d2 - log psi). Its
/// stationary law is the Gamma(d1, d2) x CRP posterior of alpha given K.
/// `verbatim`: a ~ Bernoulli(w2 / (w1 + w2)) with w1 = d1 + K + 1, then
/// alpha ~ Gamma(d1 + K + a, d2 - log psi). Kept for comparison only: it
/// does not leave the alpha posterior invariant and drifts toward larger alpha.
/// In both, w2 = n (d2 - log psi).
enum class AlphaUpdate { verbatim, classical };

/// P(a = 1 | psi): probability of the larger Gamma shape.
inline double alpha_mixture_probability(double log_psi, std::size_t K, std::size_t n, double d1,
                                        double d2, AlphaUpdate variant) {
  const double k = static_cast<double>(K);
  const double w2 = static_cast<double>(n) * (d2 - log_psi);
  if (variant == AlphaUpdate::verbatim) {
    const double w1 = d1 + k + 1.0;
    return w2 / (w1 + w2);
  }
  const double w1 = d1 + k - 1.0;
  return w1 / (w1 + w2);
}

inline double draw_alpha_component(double log_psi, std::size_t K, double d1, double d2, int a,
                                   AlphaUpdate variant, RngStream& rng) {
  const double base = variant == AlphaUpdate::verbatim ? d1 + static_cast<double>(K)
                                                       : d1 + static_cast<double>(K) - 1.0;
  return sample_gamma(base + a, d2 - log_psi, rng);
}

/// psi ~ Beta(alpha + 1, n), then a and alpha as described for AlphaUpdate.
inline double update_alpha(double alpha, std::size_t K, std::size_t n, double d1, double d2,
                           AlphaUpdate variant, RngStream& rng) {
  if (K < 1 || K > n) throw std::domain_error("alpha update needs 1 <= K <= n");
  const double psi = sample_beta_dist(alpha + 1.0, static_cast<double>(n), rng);
  const double log_psi = std::log(psi);
  const int a =
      sample_bernoulli(alpha_mixture_probability(log_psi, K, n, d1, d2, variant), rng);
  return draw_alpha_component(log_psi, K, d1, d2, a, variant, rng);
}

}  // namespace dpvs
