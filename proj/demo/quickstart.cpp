// Simulate a heteroskedastic scenario, fit the DP spike-and-slab model and
// print support recovery and the cluster-count posterior.

#include <iostream>

#include "dpvs/dpvs.hpp"

int main() {
  dpvs::ScenarioSpec spec;
  spec.scenario = dpvs::Scenario::S2;
  spec.n = 200;
  spec.p = 50;
  spec.seed = 7;
  const dpvs::Dataset data = dpvs::gen_scenario(spec);

  dpvs::ModelConfig cfg;
  dpvs::apply_model_name("dpss", cfg);
  cfg.sampler.iterations = 2000;
  cfg.sampler.seed = 7;

  const dpvs::DrawStore draws = dpvs::run_chain(data, cfg);
  const auto sel = dpvs::select_inclusion(draws.eta, 0.05);
  const auto counts = dpvs::tp_fp(sel.support, data.truth->support(), 50);
  const auto K = dpvs::k_posterior(draws.K);

  std::cout << "relative error " << dpvs::relative_error(draws.posterior_mean(), data.truth->beta0) << '\n'
            << "TP " << counts.tp << "  FP " << counts.fp << "  (true support " << data.truth->support().size()
            << ")\n"
            << "K mode " << K.mode << "  95% [" << K.lower << ", " << K.upper << "]  true "
            << data.truth->num_components() << '\n';
}
