#pragma once

// Gibbs sweeps for the four model families (spike-and-slab or horseshoe
// coefficients; one shared variance or Dirichlet-process clustered
// variances) under Gaussian or Student-t errors, and the chain driver.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "dpvs/beta_sampler.hpp"
#include "dpvs/config.hpp"
#include "dpvs/datasets.hpp"
#include "dpvs/dp_variance.hpp"
#include "dpvs/draw_store.hpp"
#include "dpvs/errors.hpp"
#include "dpvs/rand_core.hpp"
#include "dpvs/sparse_priors.hpp"

namespace dpvs {

struct HomoskedasticVariance {
  double sigma2 = 1.0;
};

struct ChainState {
  Eigen::VectorXd beta;
  std::variant<SpikeSlabState, HorseshoeState> prior;
  std::variant<HomoskedasticVariance, ClusterState> variance;
  Eigen::VectorXd G;  // latent precisions, student-t only
};

/// Names of the update blocks in the order they ran; filled only when a trace is passed.
using SweepTrace = std::vector<std::string>;

namespace detail {
inline void mark(SweepTrace* trace, const char* step) {
  if (trace) trace->emplace_back(step);
}
}  // namespace detail

/// beta = 0, omega = 0.5, eta = 1, tau2 = 1, horseshoe scales = 1, one cluster
/// holding every observation with the sample variance of y (1 if zero),
/// alpha = 1, G = 1.
inline ChainState initial_state(const Dataset& data, const ModelConfig& cfg) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  ChainState s;
  s.beta = Eigen::VectorXd::Zero(p);
  if (cfg.prior == PriorKind::spike_slab)
    s.prior = SpikeSlabState::initial(p, cfg.hyper.v0, cfg.hyper.a1, cfg.hyper.a2);
  else
    s.prior = HorseshoeState::initial(p);

  double var0 = 1.0;
  if (n > 1) {
    const double v = (data.y.array() - data.y.mean()).square().sum() / static_cast<double>(n - 1);
    if (v > 0.0 && std::isfinite(v)) var0 = v;
  }
  if (cfg.variance_model == VarianceModel::dirichlet_process)
    s.variance = ClusterState(static_cast<std::size_t>(n), var0, 1.0, cfg.hyper.dp());
  else
    s.variance = HomoskedasticVariance{var0};
  if (cfg.likelihood == LikelihoodKind::student_t) s.G = Eigen::VectorXd::Ones(n);
  return s;
}

/// beta from its Gaussian conditional given the observation variances, then
/// the shrinkage parameters of the configured prior.
inline void update_coefficients(ChainState& state, const Dataset& data, const ModelConfig& cfg,
                                Eigen::VectorXd sigma_diag, RngStream& rng, SweepTrace* trace) {
  Eigen::VectorXd lambda = std::visit([](const auto& prior) { return prior.prior_variances(); },
                                      state.prior);
  const BetaConditional cond(data.X, data.y, std::move(sigma_diag), std::move(lambda));
  state.beta = sample_beta(cond, cfg.sampler.beta_backend, rng);
  detail::mark(trace, "beta");

  if (auto* ss = std::get_if<SpikeSlabState>(&state.prior)) {
    update_tau2(state.beta, *ss, rng);
    detail::mark(trace, "tau2");
    update_eta(state.beta, *ss, rng);
    detail::mark(trace, "eta");
    ss->omega = update_omega(ss->eta, rng);
    detail::mark(trace, "omega");
  } else {
    auto& hs = std::get<HorseshoeState>(state.prior);
    update_horseshoe_locals(state.beta, hs, rng);
    detail::mark(trace, "local_scales");
    update_horseshoe_global(state.beta, hs, rng);
    detail::mark(trace, "global_scale");
  }
}

inline Eigen::VectorXd residuals(const Dataset& data, const Eigen::VectorXd& beta) {
  return data.y - data.X * beta;
}

/// Reassign every c_i, refresh cluster variances, update beta and the prior
/// with S = diag(sigma2_{c_i}), then alpha.
inline void sweep_gaussian_dp(ChainState& state, const Dataset& data, const ModelConfig& cfg,
                              RngStream& rng, SweepTrace* trace = nullptr) {
  auto& clusters = std::get<ClusterState>(state.variance);
  const Eigen::VectorXd r = residuals(data, state.beta);
  for (std::size_t i = 0; i < clusters.n(); ++i)
    reassign_gaussian(i, r[static_cast<Eigen::Index>(i)], clusters, rng);
  detail::mark(trace, "reassign");
  update_cluster_vars_gaussian(clusters, r, rng);
  detail::mark(trace, "cluster_vars");
  update_coefficients(state, data, cfg, clusters.per_observation_variances(), rng, trace);
  clusters.alpha = update_alpha(clusters.alpha, clusters.num_clusters(), clusters.n(),
                                cfg.hyper.d1, cfg.hyper.d2, cfg.sampler.alpha_update, rng);
  detail::mark(trace, "alpha");
}

/// Reassign every c_i from G_i, refresh cluster variances, update beta and
/// the prior with S = diag(G)^{-1}, redraw every G_i, then alpha.
inline void sweep_student_dp(ChainState& state, const Dataset& data, const ModelConfig& cfg,
                             RngStream& rng, SweepTrace* trace = nullptr) {
  auto& clusters = std::get<ClusterState>(state.variance);
  for (std::size_t i = 0; i < clusters.n(); ++i)
    reassign_student(i, state.G[static_cast<Eigen::Index>(i)], cfg.nu, clusters, rng);
  detail::mark(trace, "reassign");
  update_cluster_vars_student(clusters, state.G, cfg.nu, rng);
  detail::mark(trace, "cluster_vars");
  update_coefficients(state, data, cfg, state.G.cwiseInverse(), rng, trace);
  state.G = update_G(residuals(data, state.beta), clusters.per_observation_variances(), cfg.nu, rng);
  detail::mark(trace, "G");
  clusters.alpha = update_alpha(clusters.alpha, clusters.num_clusters(), clusters.n(),
                                cfg.hyper.d1, cfg.hyper.d2, cfg.sampler.alpha_update, rng);
  detail::mark(trace, "alpha");
}

/// Single shared variance. Gaussian: beta and prior with S = sigma2 I, then
/// sigma2 ~ IG(b1 + n/2, b2 + |y - X beta|^2 / 2). Student-t: beta and prior
/// with S = diag(G)^{-1}, then G, then sigma2 ~ Gamma(nu n/2 + b1, nu/2 sum G + b2).
inline void sweep_homoskedastic(ChainState& state, const Dataset& data, const ModelConfig& cfg,
                                RngStream& rng, SweepTrace* trace = nullptr) {
  auto& shared = std::get<HomoskedasticVariance>(state.variance);
  const Eigen::Index n = data.n();
  const double dn = static_cast<double>(n);
  if (cfg.likelihood == LikelihoodKind::gaussian) {
    update_coefficients(state, data, cfg, Eigen::VectorXd::Constant(n, shared.sigma2), rng, trace);
    const double rss = residuals(data, state.beta).squaredNorm();
    shared.sigma2 = sample_inverse_gamma(cfg.hyper.b1 + 0.5 * dn, cfg.hyper.b2 + 0.5 * rss, rng);
  } else {
    update_coefficients(state, data, cfg, state.G.cwiseInverse(), rng, trace);
    state.G = update_G(residuals(data, state.beta), Eigen::VectorXd::Constant(n, shared.sigma2),
                       cfg.nu, rng);
    detail::mark(trace, "G");
    shared.sigma2 = sample_gamma(0.5 * cfg.nu * dn + cfg.hyper.b1,
                                 0.5 * cfg.nu * state.G.sum() + cfg.hyper.b2, rng);
  }
  detail::mark(trace, "sigma2");
}

inline void sweep(ChainState& state, const Dataset& data, const ModelConfig& cfg, RngStream& rng,
                  SweepTrace* trace = nullptr) {
  if (cfg.variance_model == VarianceModel::homoskedastic)
    sweep_homoskedastic(state, data, cfg, rng, trace);
  else if (cfg.likelihood == LikelihoodKind::gaussian)
    sweep_gaussian_dp(state, data, cfg, rng, trace);
  else
    sweep_student_dp(state, data, cfg, rng, trace);
}

/// Empty string when every latent quantity is finite and inside its support.
inline std::string state_problem(const ChainState& s) {
  if (!s.beta.allFinite()) return "non-finite coefficient";
  const bool prior_ok = std::visit([](const auto& prior) { return prior.valid(); }, s.prior);
  if (!prior_ok) return "shrinkage parameters left their support";
  if (const auto* h = std::get_if<HomoskedasticVariance>(&s.variance)) {
    if (!(h->sigma2 > 0.0) || !std::isfinite(h->sigma2)) return "non-positive or non-finite variance";
  } else if (!std::get<ClusterState>(s.variance).valid()) {
    return "cluster state inconsistent or variance non-finite";
  }
  if (s.G.size() > 0 && (!s.G.allFinite() || !(s.G.array() > 0.0).all()))
    return "latent precision non-positive or non-finite";
  return {};
}

struct RunOptions {
  /// Kept draws larger than this are streamed to `spill_path` instead of held in memory.
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
  std::optional<std::filesystem::path> spill_path;
  bool keep_sigma2_per_obs = false;
  SweepTrace* trace = nullptr;  // records the first sweep only
};

inline std::size_t estimated_draw_bytes(const ModelConfig& cfg, Eigen::Index n, Eigen::Index p,
                                        bool per_obs) {
  const std::size_t per_row =
      static_cast<std::size_t>(p) * (cfg.prior == PriorKind::spike_slab ? 2 : 1) + 4 +
      (per_obs ? static_cast<std::size_t>(n) : 0);
  return cfg.sampler.kept() * per_row * sizeof(double);
}

inline DrawStore run_chain(const Dataset& data, const ModelConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  if (data.n() == 0 || data.p() == 0) throw ConfigError("dataset is empty");
  if (data.y.size() != data.n()) throw ConfigError("response length does not match the design");

  const auto start = std::chrono::steady_clock::now();
  const std::size_t J = cfg.sampler.iterations;
  const std::size_t burn = cfg.sampler.resolved_burn_in();
  const std::size_t thin = cfg.sampler.thin;

  DrawStore store;
  store.config = cfg;
  store.config.sampler.burn_in = burn;
  store.n = data.n();
  store.p = data.p();
  store.kept = cfg.sampler.kept();
  store.beta_sum = Eigen::VectorXd::Zero(data.p());

  std::optional<DrawWriter> spill;
  if (estimated_draw_bytes(cfg, data.n(), data.p(), opts.keep_sigma2_per_obs) > opts.memory_budget_bytes) {
    if (!opts.spill_path) throw ConfigError("kept draws exceed the memory budget and no spill path was given");
    spill.emplace(*opts.spill_path, cfg, data.p());
    store.spilled_to = *opts.spill_path;
  } else {
    const auto kept = static_cast<Eigen::Index>(store.kept);
    store.beta.resize(kept, data.p());
    if (store.has_eta()) store.eta.resize(kept, data.p());
    if (opts.keep_sigma2_per_obs) store.sigma2_per_obs.resize(kept, data.n());
  }

  ChainState state = initial_state(data, cfg);
  RngStream rng(cfg.sampler.seed, cfg.sampler.stream_id);
  std::size_t row = 0;
  for (std::size_t t = 1; t <= J; ++t) {
    try {
      sweep(state, data, cfg, rng, t == 1 ? opts.trace : nullptr);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw NumericalError("iteration " + std::to_string(t) + ": " + e.what());
    }
    if (auto problem = state_problem(state); !problem.empty())
      throw NumericalError("iteration " + std::to_string(t) + ": " + problem);

    if (t <= burn || (t - burn) % thin != 0) continue;

    double K = 0.0, alpha = 0.0, omega = 0.0, sigma2 = 0.0;
    if (const auto* cl = std::get_if<ClusterState>(&state.variance)) {
      K = static_cast<double>(cl->num_clusters());
      alpha = cl->alpha;
      store.K.push_back(K);
      store.alpha.push_back(alpha);
    } else {
      sigma2 = std::get<HomoskedasticVariance>(state.variance).sigma2;
      store.sigma2.push_back(sigma2);
    }
    const SpikeSlabState* ss = std::get_if<SpikeSlabState>(&state.prior);
    if (ss) {
      omega = ss->omega;
      store.omega.push_back(omega);
    }
    store.beta_sum += state.beta;

    if (spill) {
      spill->write_row(state.beta.transpose(), ss ? Eigen::RowVectorXd(ss->eta.transpose()) : Eigen::RowVectorXd(),
                       K, alpha, omega, sigma2);
    } else {
      const auto r = static_cast<Eigen::Index>(row);
      store.beta.row(r) = state.beta.transpose();
      if (ss) store.eta.row(r) = ss->eta.transpose();
      if (opts.keep_sigma2_per_obs) {
        if (const auto* cl = std::get_if<ClusterState>(&state.variance))
          store.sigma2_per_obs.row(r) = cl->per_observation_variances().transpose();
        else
          store.sigma2_per_obs.row(r).setConstant(sigma2);
      }
    }
    ++row;
  }
  store.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return store;
}

}  // namespace dpvs
