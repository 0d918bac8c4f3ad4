#pragma once

// Posterior draws kept by a chain, and their on-disk form.
//
// draws.csv : one header row, one row per kept iteration. Columns, in order:
//             beta_1..beta_p; eta_1..eta_p (spike-and-slab); K, alpha
//             (Dirichlet process); omega (spike-and-slab); sigma2
//             (homoskedastic). Values use shortest round-trip formatting.
// draws.meta: key=value sidecar with the full model configuration, n, p
//             and the number of kept rows.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dpvs/config.hpp"
#include "dpvs/errors.hpp"
#include "dpvs/text_io.hpp"

namespace dpvs {

struct DrawStore {
  ModelConfig config;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  std::size_t kept = 0;

  Eigen::MatrixXd beta;  // kept x p; empty when spilled
  Eigen::MatrixXd eta;   // kept x p, spike-and-slab only; empty when spilled
  std::vector<double> K;
  std::vector<double> alpha;
  std::vector<double> omega;
  std::vector<double> sigma2;
  Eigen::MatrixXd sigma2_per_obs;  // kept x n when requested

  Eigen::VectorXd beta_sum;  // running sum over kept rows, present even when spilled
  double wall_seconds = 0.0;
  std::optional<std::filesystem::path> spilled_to;

  bool has_eta() const { return config.prior == PriorKind::spike_slab; }
  bool has_clusters() const { return config.variance_model == VarianceModel::dirichlet_process; }
  bool has_omega() const { return config.prior == PriorKind::spike_slab; }
  bool has_sigma2() const { return config.variance_model == VarianceModel::homoskedastic; }

  Eigen::VectorXd posterior_mean() const {
    if (kept == 0) return Eigen::VectorXd::Zero(p);
    return beta_sum / static_cast<double>(kept);
  }
};

// ---- configuration <-> key=value --------------------------------------------

inline KeyValueDoc config_document(const ModelConfig& cfg) {
  KeyValueDoc doc;
  doc.set("model", model_name(cfg));
  doc.set("prior", to_string(cfg.prior));
  doc.set("variance_model", to_string(cfg.variance_model));
  doc.set("likelihood", to_string(cfg.likelihood));
  doc.set("nu", cfg.nu);
  doc.set("a1", cfg.hyper.a1);
  doc.set("a2", cfg.hyper.a2);
  doc.set("b1", cfg.hyper.b1);
  doc.set("b2", cfg.hyper.b2);
  doc.set("d1", cfg.hyper.d1);
  doc.set("d2", cfg.hyper.d2);
  doc.set("v0", cfg.hyper.v0);
  doc.set("iterations", static_cast<std::uint64_t>(cfg.sampler.iterations));
  doc.set("burn_in", static_cast<std::uint64_t>(cfg.sampler.resolved_burn_in()));
  doc.set("thin", static_cast<std::uint64_t>(cfg.sampler.thin));
  doc.set("seed", cfg.sampler.seed);
  doc.set("stream_id", cfg.sampler.stream_id);
  doc.set("beta_backend", to_string(cfg.sampler.beta_backend));
  doc.set("alpha_update", to_string(cfg.sampler.alpha_update));
  return doc;
}

inline ModelConfig config_from_document(const KeyValueDoc& doc) {
  ModelConfig cfg;
  cfg.prior = parse_prior(doc.get("prior"));
  cfg.variance_model = parse_variance_model(doc.get("variance_model"));
  cfg.likelihood = parse_likelihood(doc.get("likelihood"));
  cfg.nu = doc.get_double("nu");
  cfg.hyper.a1 = doc.get_double("a1");
  cfg.hyper.a2 = doc.get_double("a2");
  cfg.hyper.b1 = doc.get_double("b1");
  cfg.hyper.b2 = doc.get_double("b2");
  cfg.hyper.d1 = doc.get_double("d1");
  cfg.hyper.d2 = doc.get_double("d2");
  cfg.hyper.v0 = doc.get_double("v0");
  cfg.sampler.iterations = doc.get_u64("iterations");
  cfg.sampler.burn_in = doc.get_u64("burn_in");
  cfg.sampler.thin = doc.get_u64("thin");
  cfg.sampler.seed = doc.get_u64("seed");
  cfg.sampler.stream_id = doc.get_u64("stream_id");
  cfg.sampler.beta_backend = parse_backend(doc.get("beta_backend"));
  cfg.sampler.alpha_update = parse_alpha_update(doc.get("alpha_update"));
  return cfg;
}

// ---- writer / reader ---------------------------------------------------------

class DrawWriter {
 public:
  DrawWriter(const std::filesystem::path& path, const ModelConfig& cfg, Eigen::Index p)
      : out_(open_for_write(path)), cfg_(cfg), p_(p) {
    std::string header;
    for (Eigen::Index j = 1; j <= p; ++j) header += (j > 1 ? ",beta_" : "beta_") + std::to_string(j);
    if (spike_slab())
      for (Eigen::Index j = 1; j <= p; ++j) header += ",eta_" + std::to_string(j);
    if (clustered()) header += ",K,alpha";
    if (spike_slab()) header += ",omega";
    if (homoskedastic()) header += ",sigma2";
    out_ << header << '\n';
  }

  void write_row(const Eigen::Ref<const Eigen::RowVectorXd>& beta,
                 const Eigen::Ref<const Eigen::RowVectorXd>& eta, double K, double alpha,
                 double omega, double sigma2) {
    std::string line;
    for (Eigen::Index j = 0; j < p_; ++j) {
      if (j) line += ',';
      line += format_double(beta[j]);
    }
    if (spike_slab())
      for (Eigen::Index j = 0; j < p_; ++j) line += ',' + format_double(eta[j]);
    if (clustered()) line += ',' + format_double(K) + ',' + format_double(alpha);
    if (spike_slab()) line += ',' + format_double(omega);
    if (homoskedastic()) line += ',' + format_double(sigma2);
    out_ << line << '\n';
    if (!out_) throw ParseError("failed writing draws", 0);
  }

 private:
  bool spike_slab() const { return cfg_.prior == PriorKind::spike_slab; }
  bool clustered() const { return cfg_.variance_model == VarianceModel::dirichlet_process; }
  bool homoskedastic() const { return cfg_.variance_model == VarianceModel::homoskedastic; }

  std::ofstream out_;
  ModelConfig cfg_;
  Eigen::Index p_;
};

inline KeyValueDoc draws_metadata(const DrawStore& store) {
  KeyValueDoc doc = config_document(store.config);
  doc.set("n", static_cast<std::uint64_t>(store.n));
  doc.set("p", static_cast<std::uint64_t>(store.p));
  doc.set("kept", static_cast<std::uint64_t>(store.kept));
  return doc;
}

inline void write_draws(const std::filesystem::path& csv_path, const DrawStore& store) {
  DrawWriter writer(csv_path, store.config, store.p);
  const Eigen::RowVectorXd no_eta;
  for (std::size_t r = 0; r < store.kept; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    writer.write_row(store.beta.row(row), store.has_eta() ? Eigen::RowVectorXd(store.eta.row(row)) : no_eta,
                     store.has_clusters() ? store.K[r] : 0.0,
                     store.has_clusters() ? store.alpha[r] : 0.0,
                     store.has_omega() ? store.omega[r] : 0.0,
                     store.has_sigma2() ? store.sigma2[r] : 0.0);
  }
}

/// Reads draws.csv written by DrawWriter, with the configuration from its sidecar.
inline DrawStore read_draws(const std::filesystem::path& csv_path,
                            const std::filesystem::path& meta_path) {
  const auto meta = KeyValueDoc::read(meta_path);
  DrawStore store;
  store.config = config_from_document(meta);
  store.n = static_cast<Eigen::Index>(meta.get_u64("n"));
  store.p = static_cast<Eigen::Index>(meta.get_u64("p"));

  const auto lines = read_lines(csv_path);
  if (lines.empty()) throw ParseError("empty draws file " + csv_path.string(), 0);
  const auto header = split(lines[0], ',');
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return c;
    return std::nullopt;
  };
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != header.size()) throw ParseError("ragged draws row", i + 1);
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_finite(f, i + 1));
    rows.push_back(std::move(row));
  }
  store.kept = rows.size();
  const auto kept = static_cast<Eigen::Index>(rows.size());
  store.beta.resize(kept, store.p);
  if (store.has_eta()) store.eta.resize(kept, store.p);
  for (Eigen::Index j = 0; j < store.p; ++j) {
    const auto b = column("beta_" + std::to_string(j + 1));
    if (!b) throw ParseError("draws file lacks column beta_" + std::to_string(j + 1), 1);
    const auto e = store.has_eta() ? column("eta_" + std::to_string(j + 1)) : std::nullopt;
    if (store.has_eta() && !e) throw ParseError("draws file lacks eta columns", 1);
    for (Eigen::Index r = 0; r < kept; ++r) {
      store.beta(r, j) = rows[static_cast<std::size_t>(r)][*b];
      if (e) store.eta(r, j) = rows[static_cast<std::size_t>(r)][*e];
    }
  }
  auto scalar = [&](const char* name, std::vector<double>& dst) {
    const auto c = column(name);
    if (!c) throw ParseError(std::string("draws file lacks column ") + name, 1);
    for (const auto& row : rows) dst.push_back(row[*c]);
  };
  if (store.has_clusters()) {
    scalar("K", store.K);
    scalar("alpha", store.alpha);
  }
  if (store.has_omega()) scalar("omega", store.omega);
  if (store.has_sigma2()) scalar("sigma2", store.sigma2);
  store.beta_sum = store.beta.colwise().sum().transpose();
  return store;
}

}  // namespace dpvs
