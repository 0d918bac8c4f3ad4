#pragma once

// Draws of the regression coefficients from their Gaussian full conditional
//
//   beta | . ~ N(mu, V),  V^{-1} = X' S^{-1} X + L^{-1},  mu = V X' S^{-1} y
//
// with S = diag(sigma_diag) (length n) and L = diag(lambda_diag) (length p).
// Two routes produce the same law: a p x p Cholesky of the precision
// (O(p^3)) and the linear-solver construction that only factors an n x n
// system (O(n^2 p)).

#include <atomic>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "dpvs/errors.hpp"
#include "dpvs/rand_core.hpp"

namespace dpvs {

enum class BetaBackend { direct, fast, automatic };

/// Counts of the factorizations performed by this process, by dimension.
struct FactorizationCounters {
  std::atomic<std::uint64_t> coefficient_space{0};  // p x p
  std::atomic<std::uint64_t> observation_space{0};  // n x n

  void reset() {
    coefficient_space = 0;
    observation_space = 0;
  }
};

inline FactorizationCounters& factorization_counters() {
  static FactorizationCounters counters;
  return counters;
}

class BetaConditional {
 public:
  BetaConditional(Eigen::Ref<const Eigen::MatrixXd> X, Eigen::Ref<const Eigen::VectorXd> y,
                  Eigen::VectorXd sigma_diag, Eigen::VectorXd lambda_diag)
      : X_(X), y_(y), sigma_diag_(std::move(sigma_diag)), lambda_diag_(std::move(lambda_diag)) {
    if (y_.size() != X_.rows() || sigma_diag_.size() != X_.rows() ||
        lambda_diag_.size() != X_.cols())
      throw std::invalid_argument("beta conditional: inconsistent dimensions");
    if (!(sigma_diag_.array() > 0.0).all() || !sigma_diag_.allFinite())
      throw std::domain_error("beta conditional: observation variances must be positive");
    if (!(lambda_diag_.array() > 0.0).all() || !lambda_diag_.allFinite())
      throw std::domain_error("beta conditional: prior variances must be positive");
  }

  Eigen::Index n() const { return X_.rows(); }
  Eigen::Index p() const { return X_.cols(); }
  const Eigen::Ref<const Eigen::MatrixXd>& X() const { return X_; }
  const Eigen::Ref<const Eigen::VectorXd>& y() const { return y_; }
  const Eigen::VectorXd& sigma_diag() const { return sigma_diag_; }
  const Eigen::VectorXd& lambda_diag() const { return lambda_diag_; }

 private:
  Eigen::Ref<const Eigen::MatrixXd> X_;
  Eigen::Ref<const Eigen::VectorXd> y_;
  Eigen::VectorXd sigma_diag_;
  Eigen::VectorXd lambda_diag_;
};

inline BetaBackend resolve_backend(BetaBackend requested, Eigen::Index n, Eigen::Index p) {
  if (requested != BetaBackend::automatic) return requested;
  return p > 2 * n ? BetaBackend::fast : BetaBackend::direct;
}

namespace detail {

// Cholesky with one jitter retry of 1e-10 * mean(diag).
inline Eigen::LLT<Eigen::MatrixXd> factor_spd(Eigen::MatrixXd matrix, const char* label) {
  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() == Eigen::Success) return llt;
  const double mean_diag = matrix.diagonal().mean();
  const double jitter = 1e-10 * mean_diag;
  matrix.diagonal().array() += jitter;
  llt.compute(matrix);
  if (llt.info() == Eigen::Success) return llt;
  std::ostringstream msg;
  msg << label << " is not positive definite after jitter " << jitter << " (dim "
      << matrix.rows() << ", diag min " << matrix.diagonal().minCoeff() << ", max "
      << matrix.diagonal().maxCoeff() << ", finite " << (matrix.allFinite() ? "yes" : "no")
      << ")";
  throw NumericalError(msg.str());
}

}  // namespace detail

/// Cholesky of the p x p posterior precision.
inline Eigen::VectorXd sample_beta_direct(const BetaConditional& cond, RngStream& rng) {
  const Eigen::Index p = cond.p();
  const Eigen::VectorXd inv_sd = cond.sigma_diag().array().rsqrt();
  const Eigen::MatrixXd weighted = inv_sd.asDiagonal() * cond.X();

  Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(p, p);
  precision.selfadjointView<Eigen::Lower>().rankUpdate(weighted.transpose());
  precision.triangularView<Eigen::StrictlyUpper>() = precision.transpose();
  precision.diagonal().array() += cond.lambda_diag().array().inverse();

  ++factorization_counters().coefficient_space;
  const auto llt = detail::factor_spd(std::move(precision), "posterior precision");

  const Eigen::VectorXd rhs = weighted.transpose() * (inv_sd.asDiagonal() * cond.y());
  Eigen::VectorXd mean = llt.solve(rhs);

  Eigen::VectorXd z(p);
  for (Eigen::Index j = 0; j < p; ++j) z[j] = rng.standard_normal();
  // L L' = Q, so L'^{-1} z has covariance Q^{-1}.
  return mean + llt.matrixU().solve(z);
}

/// Linear-solver draw: u ~ N(0, L), d ~ N(0, I_n), v = S^{-1/2} X u + d,
/// solve (S^{-1/2} X L X' S^{-1/2} + I) w = S^{-1/2} y - v, beta = u + L X' S^{-1/2} w.
inline Eigen::VectorXd sample_beta_fast(const BetaConditional& cond, RngStream& rng) {
  const Eigen::Index n = cond.n();
  const Eigen::Index p = cond.p();
  const Eigen::VectorXd inv_sd = cond.sigma_diag().array().rsqrt();
  const Eigen::MatrixXd phi = inv_sd.asDiagonal() * cond.X();
  const Eigen::VectorXd& lambda = cond.lambda_diag();

  Eigen::VectorXd u(p);
  for (Eigen::Index j = 0; j < p; ++j) u[j] = std::sqrt(lambda[j]) * rng.standard_normal();
  Eigen::VectorXd delta(n);
  for (Eigen::Index i = 0; i < n; ++i) delta[i] = rng.standard_normal();

  const Eigen::VectorXd v = phi * u + delta;
  const Eigen::MatrixXd phi_scaled = phi * lambda.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  system.selfadjointView<Eigen::Lower>().rankUpdate(phi_scaled);
  system.triangularView<Eigen::StrictlyUpper>() = system.transpose();

  ++factorization_counters().observation_space;
  const auto llt = detail::factor_spd(std::move(system), "observation-space system");
  const Eigen::VectorXd w = llt.solve(inv_sd.cwiseProduct(cond.y()) - v);
  return u + lambda.cwiseProduct(phi.transpose() * w);
}

inline Eigen::VectorXd sample_beta(const BetaConditional& cond, BetaBackend backend,
                                   RngStream& rng) {
  return resolve_backend(backend, cond.n(), cond.p()) == BetaBackend::fast
             ? sample_beta_fast(cond, rng)
             : sample_beta_direct(cond, rng);
}

}  // namespace dpvs
