#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dpvs/beta_sampler.hpp"
#include "dpvs/dp_variance.hpp"
#include "dpvs/errors.hpp"

namespace dpvs {

enum class PriorKind { spike_slab, horseshoe };
enum class VarianceModel { homoskedastic, dirichlet_process };
enum class LikelihoodKind { gaussian, student_t };

struct Hyperparameters {
  double a1 = 2.01;
  double a2 = 1.0;
  double b1 = 2.01;
  double b2 = 1.0;
  double d1 = 1.0;
  double d2 = 0.5;
  double v0 = 0.005;

  DpHyper dp() const { return {b1, b2, d1, d2}; }
};

struct SamplerSettings {
  std::size_t iterations = 10000;
  std::optional<std::size_t> burn_in;  // defaults to iterations / 2
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  BetaBackend beta_backend = BetaBackend::automatic;
  AlphaUpdate alpha_update = AlphaUpdate::classical;

  std::size_t resolved_burn_in() const { return burn_in.value_or(iterations / 2); }
  std::size_t kept() const { return (iterations - resolved_burn_in()) / thin; }
};

struct ModelConfig {
  PriorKind prior = PriorKind::spike_slab;
  VarianceModel variance_model = VarianceModel::dirichlet_process;
  LikelihoodKind likelihood = LikelihoodKind::gaussian;
  double nu = 2.0;  // degrees of freedom, student_t only
  Hyperparameters hyper;
  SamplerSettings sampler;

  void validate() const {
    if (sampler.iterations == 0) throw ConfigError("iterations must be positive");
    if (sampler.resolved_burn_in() >= sampler.iterations)
      throw ConfigError("burn-in must be smaller than the number of iterations");
    if (sampler.thin < 1) throw ConfigError("thin must be at least 1");
    if (likelihood == LikelihoodKind::student_t && !(nu > 0.0))
      throw ConfigError("student-t degrees of freedom must be positive");
    const Hyperparameters& h = hyper;
    for (double v : {h.a1, h.a2, h.b1, h.b2, h.d1, h.d2})
      if (!(v > 0.0)) throw ConfigError("hyperparameters must be positive");
    if (!(h.v0 > 0.0 && h.v0 < 1.0)) throw ConfigError("v0 must lie in (0, 1)");
  }
};

// ---- names used by the CLI and the file formats ----------------------------

inline std::string_view to_string(PriorKind k) {
  return k == PriorKind::spike_slab ? "spike_slab" : "horseshoe";
}
inline std::string_view to_string(VarianceModel v) {
  return v == VarianceModel::homoskedastic ? "homoskedastic" : "dirichlet_process";
}
inline std::string_view to_string(LikelihoodKind l) {
  return l == LikelihoodKind::gaussian ? "gaussian" : "student_t";
}
inline std::string_view to_string(BetaBackend b) {
  switch (b) {
    case BetaBackend::direct: return "direct";
    case BetaBackend::fast: return "fast";
    default: return "auto";
  }
}
inline std::string_view to_string(AlphaUpdate a) {
  return a == AlphaUpdate::verbatim ? "verbatim" : "classical";
}

inline PriorKind parse_prior(std::string_view s) {
  if (s == "spike_slab") return PriorKind::spike_slab;
  if (s == "horseshoe") return PriorKind::horseshoe;
  throw ConfigError("unknown prior '" + std::string(s) + "'");
}
inline VarianceModel parse_variance_model(std::string_view s) {
  if (s == "homoskedastic") return VarianceModel::homoskedastic;
  if (s == "dirichlet_process") return VarianceModel::dirichlet_process;
  throw ConfigError("unknown variance model '" + std::string(s) + "'");
}
inline LikelihoodKind parse_likelihood(std::string_view s) {
  if (s == "gaussian") return LikelihoodKind::gaussian;
  if (s == "student_t" || s == "t") return LikelihoodKind::student_t;
  throw ConfigError("unknown likelihood '" + std::string(s) + "'");
}
inline BetaBackend parse_backend(std::string_view s) {
  if (s == "direct") return BetaBackend::direct;
  if (s == "fast") return BetaBackend::fast;
  if (s == "auto") return BetaBackend::automatic;
  throw ConfigError("unknown beta backend '" + std::string(s) + "'");
}
inline AlphaUpdate parse_alpha_update(std::string_view s) {
  if (s == "verbatim") return AlphaUpdate::verbatim;
  if (s == "classical") return AlphaUpdate::classical;
  throw ConfigError("unknown alpha update '" + std::string(s) + "'");
}

/// Short model names: ss, hs (homoskedastic) and dpss, dphs (Dirichlet process).
inline void apply_model_name(std::string_view name, ModelConfig& cfg) {
  if (name == "ss" || name == "dpss")
    cfg.prior = PriorKind::spike_slab;
  else if (name == "hs" || name == "dphs")
    cfg.prior = PriorKind::horseshoe;
  else
    throw ConfigError("unknown model '" + std::string(name) + "' (expected ss, hs, dpss, dphs)");
  cfg.variance_model = name.starts_with("dp") ? VarianceModel::dirichlet_process
                                              : VarianceModel::homoskedastic;
}

inline std::string model_name(const ModelConfig& cfg) {
  std::string s = cfg.variance_model == VarianceModel::dirichlet_process ? "dp" : "";
  return s + (cfg.prior == PriorKind::spike_slab ? "ss" : "hs");
}

}  // namespace dpvs
