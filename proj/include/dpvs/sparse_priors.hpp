#pragma once

// Full-conditional updates for the shrinkage layer of the two coefficient
// priors: spike-and-slab (tau2_j, eta_j, omega) and the horseshoe in its
// inverse-gamma augmented form (lambda2_j, nu_j, tau2, xi).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/Core>

#include "dpvs/rand_core.hpp"

namespace dpvs {

struct SpikeSlabState {
  Eigen::VectorXd tau2;
  Eigen::VectorXd eta;  // every entry is exactly v0 or 1
  double omega = 0.5;
  double v0 = 0.005;
  double a1 = 2.01;
  double a2 = 1.0;

  static SpikeSlabState initial(Eigen::Index p, double v0, double a1, double a2) {
    SpikeSlabState s;
    s.tau2 = Eigen::VectorXd::Ones(p);
    s.eta = Eigen::VectorXd::Ones(p);
    s.omega = 0.5;
    s.v0 = v0;
    s.a1 = a1;
    s.a2 = a2;
    return s;
  }

  Eigen::VectorXd prior_variances() const { return eta.cwiseProduct(tau2); }

  bool valid() const {
    if (!(omega >= 0.0 && omega <= 1.0) || !(v0 > 0.0 && v0 < 1.0)) return false;
    if (tau2.size() != eta.size()) return false;
    for (Eigen::Index j = 0; j < eta.size(); ++j) {
      if (eta[j] != v0 && eta[j] != 1.0) return false;
      if (!(tau2[j] > 0.0) || !std::isfinite(tau2[j])) return false;
    }
    return true;
  }
};

struct HorseshoeState {
  Eigen::VectorXd lambda2;
  Eigen::VectorXd nu_aux;
  double tau2 = 1.0;
  double xi_aux = 1.0;

  static HorseshoeState initial(Eigen::Index p) {
    HorseshoeState s;
    s.lambda2 = Eigen::VectorXd::Ones(p);
    s.nu_aux = Eigen::VectorXd::Ones(p);
    return s;
  }

  Eigen::VectorXd prior_variances() const { return tau2 * lambda2; }

  bool valid() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (lambda2.size() != nu_aux.size() || !positive(tau2) || !positive(xi_aux)) return false;
    for (Eigen::Index j = 0; j < lambda2.size(); ++j)
      if (!positive(lambda2[j]) || !positive(nu_aux[j])) return false;
    return true;
  }
};

// ---- spike-and-slab -------------------------------------------------------

/// tau_j^{-2} | . ~ Gamma(a1 + 1/2, a2 + beta_j^2 / (2 eta_j)); returns tau2_j.
inline double draw_tau2_coordinate(double beta_j, double eta_j, double a1, double a2,
                                   RngStream& rng) {
  return 1.0 / sample_gamma(a1 + 0.5, a2 + beta_j * beta_j / (2.0 * eta_j), rng);
}

/// Probability that eta_j = v0, computed from log-weights.
inline double spike_probability(double beta_j, double tau2_j, double omega, double v0) {
  const double b2 = beta_j * beta_j;
  const double log_spike = std::log1p(-omega) - 0.5 * std::log(v0) - b2 / (2.0 * v0 * tau2_j);
  const double log_slab = std::log(omega) - b2 / (2.0 * tau2_j);
  const double top = std::max(log_spike, log_slab);
  const double w_spike = std::exp(log_spike - top);
  const double w_slab = std::exp(log_slab - top);
  return w_spike / (w_spike + w_slab);
}

inline double draw_eta_coordinate(double beta_j, double tau2_j, double omega, double v0,
                                  RngStream& rng) {
  return sample_bernoulli(spike_probability(beta_j, tau2_j, omega, v0), rng) ? v0 : 1.0;
}

inline void update_tau2(const Eigen::VectorXd& beta, SpikeSlabState& state, RngStream& rng) {
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    state.tau2[j] = draw_tau2_coordinate(beta[j], state.eta[j], state.a1, state.a2, rng);
}

inline void update_eta(const Eigen::VectorXd& beta, SpikeSlabState& state, RngStream& rng) {
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    state.eta[j] = draw_eta_coordinate(beta[j], state.tau2[j], state.omega, state.v0, rng);
}

/// omega | eta ~ Beta(1 + #{eta_j = 1}, 1 + #{eta_j = v0}).
inline double update_omega(const Eigen::VectorXd& eta, RngStream& rng) {
  const auto slab = (eta.array() == 1.0).count();
  const auto spike = eta.size() - slab;
  return sample_beta_dist(1.0 + static_cast<double>(slab), 1.0 + static_cast<double>(spike), rng);
}

// ---- horseshoe ------------------------------------------------------------

/// Auxiliary of a half-Cauchy scale given its square: IG(1, 1 + 1/scale2).
inline double draw_horseshoe_auxiliary(double scale2, RngStream& rng) {
  return sample_inverse_gamma(1.0, 1.0 + 1.0 / scale2, rng);
}

/// lambda2_j ~ IG(1, 1/nu_j + beta_j^2 / (2 tau2)), then nu_j ~ IG(1, 1 + 1/lambda2_j).
inline void draw_horseshoe_local_coordinate(double beta_j, double tau2, double& lambda2_j,
                                            double& nu_j, RngStream& rng) {
  lambda2_j = sample_inverse_gamma(1.0, 1.0 / nu_j + beta_j * beta_j / (2.0 * tau2), rng);
  nu_j = draw_horseshoe_auxiliary(lambda2_j, rng);
}

inline void update_horseshoe_locals(const Eigen::VectorXd& beta, HorseshoeState& state,
                                    RngStream& rng) {
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    draw_horseshoe_local_coordinate(beta[j], state.tau2, state.lambda2[j], state.nu_aux[j], rng);
}

/// tau2 ~ IG((p+1)/2, 1/xi + sum_j beta_j^2 / (2 lambda2_j)), then xi ~ IG(1, 1 + 1/tau2).
inline void update_horseshoe_global(const Eigen::VectorXd& beta, HorseshoeState& state,
                                    RngStream& rng) {
  const double p = static_cast<double>(beta.size());
  const double ssq = (beta.array().square() / state.lambda2.array()).sum();
  state.tau2 = sample_inverse_gamma(0.5 * (p + 1.0), 1.0 / state.xi_aux + 0.5 * ssq, rng);
  state.xi_aux = draw_horseshoe_auxiliary(state.tau2, rng);
}

}  // namespace dpvs
