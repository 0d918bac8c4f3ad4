#pragma once

// Drivers built on the engine: seeded replicate sweeps over synthetic
// scenarios and the per-gene network reconstruction pipeline.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "dpvs/analysis.hpp"
#include "dpvs/config.hpp"
#include "dpvs/datasets.hpp"
#include "dpvs/errors.hpp"
#include "dpvs/gibbs_engine.hpp"
#include "dpvs/rand_core.hpp"
#include "dpvs/text_io.hpp"

namespace dpvs {

/// Runs task(0..count-1) on up to `workers` threads. Tasks must write only to
/// their own slots; the first exception thrown is rethrown after all threads join.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Default support-recovery rule for a prior: inclusion for spike-and-slab,
/// credible interval for horseshoe.
inline SelectionMethod default_selection(PriorKind prior) {
  return prior == PriorKind::spike_slab ? SelectionMethod::inclusion : SelectionMethod::credible_interval;
}

inline SelectionReport select_support(const DrawStore& draws, SelectionMethod method, double zeta) {
  switch (method) {
    case SelectionMethod::inclusion:
      if (!draws.has_eta()) throw ConfigError("inclusion selection needs spike-and-slab draws");
      return select_inclusion(draws.eta, zeta);
    case SelectionMethod::credible_interval:
      return select_credible_interval(draws.beta, zeta);
    default:
      return select_magnitude_threshold(draws.beta, zeta);
  }
}

/// Metrics of one fit against the ground truth of a synthetic dataset.
inline MetricsReport evaluate(const DrawStore& draws, const GroundTruth& truth, SelectionMethod method,
                              double zeta) {
  MetricsReport m;
  m.rel_error = relative_error(draws.posterior_mean(), truth.beta0);
  const auto sel = select_support(draws, method, zeta);
  const auto support = truth.support();
  const auto counts = tp_fp(sel.support, support, static_cast<std::size_t>(truth.beta0.size()));
  m.tp = counts.tp;
  m.fp = counts.fp;
  m.true_support = support.size();
  if (draws.has_clusters() && !draws.K.empty()) m.K = k_posterior(draws.K);
  return m;
}

// ---- replicate sweeps --------------------------------------------------------

struct ReplicateResult {
  std::string model;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  MetricsReport metrics;
  double wall_seconds = 0.0;
};

struct SweepPlan {
  ScenarioSpec scenario;             // seed field is overwritten per replicate
  std::vector<ModelConfig> models;   // sampler seed/stream overwritten per replicate
  std::vector<std::uint64_t> seeds;  // one replicate per seed
  double zeta = 0.05;
  std::size_t workers = 1;
};

/// Stream used by model m on the replicate with data seed s. The same data
/// is shared by all models of a replicate.
inline std::uint64_t replicate_stream_id(std::uint64_t seed, std::size_t model_index) {
  return derive_stream_id(seed, 1000 + model_index);
}

/// One result per (model, seed), model-major, independent of the worker count.
inline std::vector<ReplicateResult> run_sweep(const SweepPlan& plan) {
  const std::size_t M = plan.models.size();
  const std::size_t R = plan.seeds.size();
  std::vector<ReplicateResult> out(M * R);
  parallel_for(M * R, plan.workers, [&](std::size_t task) {
    const std::size_t m = task / R;
    const std::size_t r = task % R;
    ScenarioSpec spec = plan.scenario;
    spec.seed = plan.seeds[r];
    const Dataset data = gen_scenario(spec);
    ModelConfig cfg = plan.models[m];
    cfg.sampler.seed = spec.seed;
    cfg.sampler.stream_id = replicate_stream_id(spec.seed, m);
    const DrawStore draws = run_chain(data, cfg);
    ReplicateResult& res = out[task];
    res.model = model_name(cfg);
    res.seed = spec.seed;
    res.stream_id = cfg.sampler.stream_id;
    res.metrics = evaluate(draws, *data.truth, default_selection(cfg.prior), plan.zeta);
    res.wall_seconds = draws.wall_seconds;
  });
  return out;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::domain_error("median of empty sequence");
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Per-model medians of rel_error, tp, fp and K mode, as key=value lines.
inline KeyValueDoc sweep_summary(const std::vector<ReplicateResult>& results) {
  std::map<std::string, std::vector<const ReplicateResult*>> by_model;
  std::vector<std::string> order;
  for (const auto& r : results) {
    if (!by_model.count(r.model)) order.push_back(r.model);
    by_model[r.model].push_back(&r);
  }
  KeyValueDoc doc;
  for (const auto& name : order) {
    std::vector<double> err, tp, fp, k;
    for (const auto* r : by_model[name]) {
      err.push_back(r->metrics.rel_error);
      tp.push_back(static_cast<double>(r->metrics.tp));
      fp.push_back(static_cast<double>(r->metrics.fp));
      if (r->metrics.K) k.push_back(r->metrics.K->mode);
    }
    doc.set(name + ".replicates", static_cast<std::uint64_t>(err.size()));
    doc.set(name + ".median_rel_error", median(err));
    doc.set(name + ".median_tp", median(tp));
    doc.set(name + ".median_fp", median(fp));
    if (!k.empty()) doc.set(name + ".median_K_mode", median(k));
  }
  return doc;
}

inline std::string sweep_table(const std::vector<ReplicateResult>& results) {
  std::string out = "model,seed,stream_id,rel_error,tp,fp,K_mode\n";
  for (const auto& r : results) {
    out += r.model + ',' + std::to_string(r.seed) + ',' + std::to_string(r.stream_id) + ',' +
           format_double(r.metrics.rel_error) + ',' + std::to_string(r.metrics.tp) + ',' +
           std::to_string(r.metrics.fp) + ',' + (r.metrics.K ? std::to_string(r.metrics.K->mode) : "") + '\n';
  }
  return out;
}

// ---- network reconstruction --------------------------------------------------

/// Gene `target` as the response, every other gene as a predictor; samples
/// are observations. Both sides are centered.
inline Dataset gene_regression(const ExpressionMatrix& expr, Eigen::Index target) {
  const Eigen::Index G = expr.values.rows();
  const Eigen::Index S = expr.values.cols();
  Dataset d;
  d.y = expr.values.row(target).transpose();
  d.X.resize(S, G - 1);
  for (Eigen::Index j = 0, c = 0; j < G; ++j) {
    if (j == target) continue;
    d.X.col(c++) = expr.values.row(j).transpose();
  }
  center(d);
  return d;
}

struct NetworkResult {
  Eigen::MatrixXd prob;  // prob(i, j): evidence that gene j regulates gene i; zero diagonal
  std::vector<std::uint64_t> stream_ids;
  std::vector<std::pair<std::size_t, std::string>> failures;  // (gene, message)
};

/// One fit per gene with stream derive_stream_id(cfg.sampler.seed, gene).
/// Spike-and-slab rows hold inclusion probabilities, horseshoe rows
/// P(|beta| > threshold). Failed genes keep a zero row and are listed.
inline NetworkResult run_network(const ExpressionMatrix& expr, const ModelConfig& base, double threshold,
                                 std::size_t workers) {
  const Eigen::Index G = expr.values.rows();
  if (G < 2) throw ConfigError("network reconstruction needs at least two genes");
  NetworkResult out;
  out.prob = Eigen::MatrixXd::Zero(G, G);
  out.stream_ids.resize(static_cast<std::size_t>(G));
  std::vector<std::optional<std::string>> errors(static_cast<std::size_t>(G));
  for (Eigen::Index i = 0; i < G; ++i)
    out.stream_ids[static_cast<std::size_t>(i)] = derive_stream_id(base.sampler.seed, static_cast<std::uint64_t>(i));

  parallel_for(static_cast<std::size_t>(G), workers, [&](std::size_t gi) {
    const auto i = static_cast<Eigen::Index>(gi);
    try {
      ModelConfig cfg = base;
      cfg.sampler.stream_id = out.stream_ids[gi];
      const DrawStore draws = run_chain(gene_regression(expr, i), cfg);
      const Eigen::VectorXd row = cfg.prior == PriorKind::spike_slab
                                      ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                                            select_inclusion(draws.eta, 0.5).statistic.data(), G - 1))
                                      : edge_probability(draws.beta, threshold);
      for (Eigen::Index j = 0, c = 0; j < G; ++j) {
        if (j == i) continue;
        out.prob(i, j) = row[c++];
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      errors[gi] = e.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (errors[i]) out.failures.emplace_back(i, *errors[i]);
  return out;
}

/// Gold standard as a 0/1 matrix with gold(i, j) = 1 for a listed edge
/// "regulator target 1" (j = regulator, i = target). Lines with weight 0
/// are non-edges; unknown names are a ParseError.
inline Eigen::MatrixXd load_gold_standard(const std::filesystem::path& path, const std::vector<std::string>& genes) {
  const auto G = static_cast<Eigen::Index>(genes.size());
  Eigen::MatrixXd gold = Eigen::MatrixXd::Zero(G, G);
  auto index_of = [&](std::string_view name, std::size_t line) {
    for (std::size_t k = 0; k < genes.size(); ++k)
      if (genes[k] == name) return static_cast<Eigen::Index>(k);
    throw ParseError("unknown gene '" + std::string(name) + "'", line);
  };
  const auto lines = read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    for (auto f : split(line, line.find('\t') != std::string_view::npos ? '\t' : ' '))
      if (!f.empty()) fields.push_back(f);
    if (fields.size() != 3) throw ParseError("expected 'regulator target weight'", ln + 1);
    const Eigen::Index reg = index_of(fields[0], ln + 1);
    const Eigen::Index tgt = index_of(fields[1], ln + 1);
    const double w = parse_finite(fields[2], ln + 1);
    if (w != 0.0 && w != 1.0) throw ParseError("edge weight must be 0 or 1", ln + 1);
    if (reg != tgt) gold(tgt, reg) = w;
  }
  return gold;
}

inline void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                             const std::vector<std::string>& names) {
  auto out = open_for_write(path);
  out << "gene";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
    out << '\n';
  }
}

/// Rows = networks, columns = models, entries = log-loss; missing cells are blank.
inline std::string log_loss_table(const std::vector<std::string>& networks, const std::vector<std::string>& models,
                                  const std::map<std::pair<std::string, std::string>, double>& values) {
  std::string out = "network";
  for (const auto& m : models) out += '\t' + m;
  out += '\n';
  for (const auto& net : networks) {
    out += net;
    for (const auto& m : models) {
      out += '\t';
      if (auto it = values.find({net, m}); it != values.end()) out += format_double(it->second);
    }
    out += '\n';
  }
  return out;
}

}  // namespace dpvs
