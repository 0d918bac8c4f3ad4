#pragma once

// The 10-gene planted-edge pipeline and the hand-evaluated log-loss toys.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dpvs/dpvs.hpp"

namespace dpvs::testing {

inline constexpr Eigen::Index kPlantedTarget = 3;
inline constexpr Eigen::Index kPlantedRegulator = 7;

/// 10 independent standard-normal genes over 100 samples, except that the
/// target gene is 0.8 x regulator + N(0, 0.25) noise.
inline ExpressionMatrix planted_expression(std::uint64_t seed) {
  RngStream rng(seed, 51);
  ExpressionMatrix m;
  m.values.resize(10, 100);
  for (Eigen::Index g = 0; g < 10; ++g) {
    m.genes.push_back("G" + std::to_string(g + 1));
    for (Eigen::Index s = 0; s < 100; ++s) m.values(g, s) = rng.standard_normal();
  }
  for (Eigen::Index s = 0; s < 100; ++s)
    m.values(kPlantedTarget, s) = 0.8 * m.values(kPlantedRegulator, s) + 0.5 * rng.standard_normal();
  return m;
}

/// True when the planted regulator holds the strict maximum of the target's row.
inline bool planted_edge_recovered(const std::string& model, std::uint64_t seed, std::size_t iterations = 2000) {
  ModelConfig cfg;
  apply_model_name(model, cfg);
  cfg.sampler.iterations = iterations;
  cfg.sampler.seed = seed;
  const auto res = run_network(planted_expression(seed), cfg, 0.1, 1);
  if (!res.failures.empty()) return false;
  for (Eigen::Index i = 0; i < res.prob.rows(); ++i)
    if (res.prob(i, i) != 0.0) return false;
  const auto row = res.prob.row(kPlantedTarget);
  for (Eigen::Index j = 0; j < row.size(); ++j)
    if (j != kPlantedRegulator && row[j] >= row[kPlantedRegulator]) return false;
  return true;
}

struct LogLossToy {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
};

/// Uniform forecast, clipped perfect forecast and the two-gene hand example.
inline std::vector<LogLossToy> log_loss_toys() {
  std::vector<LogLossToy> out;
  Eigen::MatrixXd gold = Eigen::MatrixXd::Zero(5, 5);
  gold(0, 1) = gold(2, 4) = gold(3, 0) = 1.0;
  out.push_back({"uniform", log_loss(Eigen::MatrixXd::Constant(5, 5, 0.5), gold), std::log(2.0)});
  out.push_back({"perfect", log_loss(gold, gold), 0.0});
  Eigen::Matrix2d prob, g2;
  prob << 0.0, 0.8, 0.3, 0.0;
  g2 << 0.0, 1.0, 0.0, 0.0;
  out.push_back({"two_gene", log_loss(prob, g2), 0.5 * (-std::log(0.8) - std::log(0.7))});
  return out;
}

}  // namespace dpvs::testing
