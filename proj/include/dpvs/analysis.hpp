#pragma once

// Posterior summaries and support recovery: relative error, inclusion and
// credible-interval selection, the z-cut rule, edge probabilities, log-loss,
// TP/FP counts and the posterior of the cluster count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <boost/math/distributions/normal.hpp>

#include "dpvs/errors.hpp"
#include "dpvs/text_io.hpp"

namespace dpvs {

inline double relative_error(const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta0) {
  if (beta_hat.size() != beta0.size()) throw std::domain_error("relative_error: length mismatch");
  const double denom = beta0.norm();
  if (!(denom > 0.0)) throw std::domain_error("relative_error: true coefficients are all zero");
  return (beta_hat - beta0).norm() / denom;
}

enum class SelectionMethod { inclusion, credible_interval, magnitude_threshold };

inline std::string_view to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::inclusion: return "inclusion";
    case SelectionMethod::credible_interval: return "credible_interval";
    default: return "magnitude_threshold";
  }
}

inline SelectionMethod parse_selection_method(std::string_view s) {
  if (s == "inclusion") return SelectionMethod::inclusion;
  if (s == "credible_interval" || s == "ci") return SelectionMethod::credible_interval;
  if (s == "magnitude_threshold" || s == "zcut") return SelectionMethod::magnitude_threshold;
  throw ConfigError("unknown selection method '" + std::string(s) + "'");
}

struct SelectionReport {
  SelectionMethod method = SelectionMethod::inclusion;
  double zeta = 0.05;
  std::vector<std::size_t> support;  // 0-based, ascending
  // inclusion: P(eta_j = 1); credible_interval: lower/upper bounds;
  // magnitude_threshold: |posterior mean| in `statistic`, cut in `cut`.
  std::vector<double> statistic;
  std::vector<double> lower;
  std::vector<double> upper;
  double cut = 0.0;

  std::string document() const;
};

namespace detail {
inline void check_zeta(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw std::domain_error("zeta must lie in (0, 1)");
}

/// Nearest-rank empirical quantile of sorted values: element ceil(q N), at least the first.
inline double nearest_rank(const std::vector<double>& sorted, double q) {
  const auto N = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(N)));
  rank = std::clamp<std::size_t>(rank, 1, N);
  return sorted[rank - 1];
}
}  // namespace detail

/// j is selected iff the posterior frequency of eta_j = 1 is strictly above 1 - zeta.
inline SelectionReport select_inclusion(const Eigen::MatrixXd& eta_draws, double zeta = 0.05) {
  detail::check_zeta(zeta);
  SelectionReport rep;
  rep.method = SelectionMethod::inclusion;
  rep.zeta = zeta;
  const auto N = eta_draws.rows();
  for (Eigen::Index j = 0; j < eta_draws.cols(); ++j) {
    const double freq =
        N == 0 ? 0.0 : static_cast<double>((eta_draws.col(j).array() == 1.0).count()) / static_cast<double>(N);
    rep.statistic.push_back(freq);
    if (freq > 1.0 - zeta) rep.support.push_back(static_cast<std::size_t>(j));
  }
  return rep;
}

/// j is selected iff the empirical [zeta/2, 1 - zeta/2] interval of beta_j excludes 0.
inline SelectionReport select_credible_interval(const Eigen::MatrixXd& beta_draws, double zeta = 0.05) {
  detail::check_zeta(zeta);
  if (beta_draws.rows() < 2) throw std::domain_error("credible intervals need at least two draws");
  SelectionReport rep;
  rep.method = SelectionMethod::credible_interval;
  rep.zeta = zeta;
  std::vector<double> col(static_cast<std::size_t>(beta_draws.rows()));
  for (Eigen::Index j = 0; j < beta_draws.cols(); ++j) {
    for (Eigen::Index r = 0; r < beta_draws.rows(); ++r) col[static_cast<std::size_t>(r)] = beta_draws(r, j);
    std::sort(col.begin(), col.end());
    const double lo = detail::nearest_rank(col, zeta / 2.0);
    const double hi = detail::nearest_rank(col, 1.0 - zeta / 2.0);
    rep.lower.push_back(lo);
    rep.upper.push_back(hi);
    if (lo > 0.0 || hi < 0.0) rep.support.push_back(static_cast<std::size_t>(j));
  }
  return rep;
}

/// z-cut: j is selected iff |posterior mean of beta_j| >= z_{1 - zeta/2}.
inline SelectionReport select_magnitude_threshold(const Eigen::MatrixXd& beta_draws, double zeta = 0.05) {
  detail::check_zeta(zeta);
  if (beta_draws.rows() < 1) throw std::domain_error("z-cut needs at least one draw");
  SelectionReport rep;
  rep.method = SelectionMethod::magnitude_threshold;
  rep.zeta = zeta;
  rep.cut = boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - zeta / 2.0);
  const Eigen::VectorXd mean = beta_draws.colwise().mean().transpose();
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    rep.statistic.push_back(std::abs(mean[j]));
    if (std::abs(mean[j]) >= rep.cut) rep.support.push_back(static_cast<std::size_t>(j));
  }
  return rep;
}

inline std::string SelectionReport::document() const {
  KeyValueDoc doc;
  doc.set("method", to_string(method));
  doc.set("zeta", zeta);
  if (method == SelectionMethod::magnitude_threshold) doc.set("cut", cut);
  std::vector<double> one_based;
  for (auto j : support) one_based.push_back(static_cast<double>(j + 1));
  doc.set("support_size", static_cast<std::uint64_t>(support.size()));
  doc.set("support", join_doubles(one_based));
  return doc.str();
}

/// Per-coefficient posterior frequency of |beta_j| > threshold.
inline Eigen::VectorXd edge_probability(const Eigen::MatrixXd& beta_draws, double threshold = 0.1) {
  if (!(threshold > 0.0)) throw std::domain_error("edge threshold must be positive");
  Eigen::VectorXd out(beta_draws.cols());
  const double N = static_cast<double>(beta_draws.rows());
  for (Eigen::Index j = 0; j < beta_draws.cols(); ++j)
    out[j] = N == 0 ? 0.0 : static_cast<double>((beta_draws.col(j).array().abs() > threshold).count()) / N;
  return out;
}

/// Mean over genes i of the mean Bernoulli log-loss over j != i, with
/// probabilities clipped to [1e-12, 1 - 1e-12]. The diagonal is ignored.
inline double log_loss(const Eigen::MatrixXd& prob, const Eigen::MatrixXd& gold) {
  constexpr double eps = 1e-12;
  const auto N = prob.rows();
  if (prob.cols() != N || gold.rows() != N || gold.cols() != N)
    throw std::domain_error("log_loss: matrices must be square and of equal size");
  if (N < 2) throw std::domain_error("log_loss: need at least two genes");
  double total = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i == j) continue;
      const double p = std::clamp(prob(i, j), eps, 1.0 - eps);
      row -= gold(i, j) * std::log(p) + (1.0 - gold(i, j)) * std::log1p(-p);
    }
    total += row / static_cast<double>(N - 1);
  }
  return total / static_cast<double>(N);
}

struct TpFp {
  std::size_t tp = 0;
  std::size_t fp = 0;
};

inline TpFp tp_fp(const std::vector<std::size_t>& selected, const std::vector<std::size_t>& truth,
                  std::size_t p) {
  TpFp out;
  for (auto j : selected) {
    if (j >= p) throw std::domain_error("tp_fp: selected index outside 1..p");
    if (std::find(truth.begin(), truth.end(), j) != truth.end())
      ++out.tp;
    else
      ++out.fp;
  }
  return out;
}

struct KPosterior {
  std::map<int, double> histogram;  // K -> posterior probability
  int mode = 0;
  int lower = 0;  // central 95% interval, nearest rank
  int upper = 0;
};

inline KPosterior k_posterior(const std::vector<double>& K_draws) {
  if (K_draws.empty()) throw std::domain_error("k_posterior: no draws");
  KPosterior out;
  std::vector<double> sorted = K_draws;
  std::sort(sorted.begin(), sorted.end());
  std::map<int, std::size_t> counts;
  for (double k : K_draws) {
    if (!(k >= 1.0) || k != std::floor(k)) throw std::domain_error("k_posterior: draws must be positive integers");
    ++counts[static_cast<int>(k)];
  }
  std::size_t best = 0;
  for (const auto& [k, c] : counts) {
    out.histogram[k] = static_cast<double>(c) / static_cast<double>(K_draws.size());
    if (c > best) {
      best = c;
      out.mode = k;
    }
  }
  out.lower = static_cast<int>(detail::nearest_rank(sorted, 0.025));
  out.upper = static_cast<int>(detail::nearest_rank(sorted, 0.975));
  return out;
}

struct MetricsReport {
  double rel_error = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t true_support = 0;
  std::optional<KPosterior> K;
  std::optional<double> log_loss;

  KeyValueDoc document() const {
    KeyValueDoc doc;
    doc.set("rel_error", rel_error);
    doc.set("tp", static_cast<std::uint64_t>(tp));
    doc.set("fp", static_cast<std::uint64_t>(fp));
    doc.set("true_support", static_cast<std::uint64_t>(true_support));
    if (K) {
      doc.set("K_mode", K->mode);
      doc.set("K_lower95", K->lower);
      doc.set("K_upper95", K->upper);
      std::string hist;
      for (const auto& [k, prob] : K->histogram) {
        if (!hist.empty()) hist += ',';
        hist += std::to_string(k) + ':' + format_double(prob);
      }
      doc.set("K_histogram", hist);
    }
    if (log_loss) doc.set("log_loss", *log_loss);
    return doc;
  }
};

}  // namespace dpvs
