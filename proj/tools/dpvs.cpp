// dpvs command-line driver.
//
//   dpvs simulate  --scenario S2 --n 200 --p 50 --out-dir run/data
//   dpvs fit       --data run/data/data.csv --model dpss --out-dir run/fit
//   dpvs select    --draws run/fit --out-dir run/select
//   dpvs evaluate  --draws run/fit --truth run/data/truth.txt --out-dir run/eval
//   dpvs network   --data expr.tsv --model dpss,dphs --gold gold.tsv --out-dir run/net
//   dpvs sweep     --scenario S2 --n 200 --p 50 --models dpss,ss --replicates 10 --out-dir run/sweep
//   dpvs replay    --manifest run/fit/manifest.txt
//
// Every command writes <out-dir>/manifest.txt holding the command, the
// version and every resolved flag as arg.<flag>=<value>; `replay` rebuilds
// the command line from it. Exit codes: 0 ok, 2 usage, 3 I/O or parse,
// 4 numerical failure, 1 anything else.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dpvs/dpvs.hpp"

namespace fs = std::filesystem;
using namespace dpvs;

namespace {

constexpr int kUsage = 2;
constexpr int kIo = 3;
constexpr int kNumerical = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- manifest ----------------------------------------------------------------

class Manifest {
 public:
  explicit Manifest(std::string command) {
    doc_.set("command", std::move(command));
    doc_.set("version", DPVS_VERSION);
  }
  template <class T>
  void arg(const std::string& flag, const T& value) {
    doc_.set("arg." + flag, value);
  }
  void flag(const std::string& flag, bool on) { doc_.set("arg." + flag, on ? "true" : "false"); }
  template <class T>
  void info(const std::string& key, const T& value) {
    doc_.set(key, value);
  }
  void write(const fs::path& out_dir) const { doc_.write(out_dir / "manifest.txt", "dpvs run manifest"); }

 private:
  KeyValueDoc doc_;
};

std::string abs_path(const fs::path& p) { return fs::absolute(p).lexically_normal().string(); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto tok : split(s, ','))
    if (!tok.empty()) out.emplace_back(tok);
  return out;
}

// ---- shared model flags ------------------------------------------------------

struct ModelArgs {
  std::string model = "dpss";
  std::string likelihood = "gaussian";
  double nu = 2.0;
  std::size_t iterations = 10000;
  std::optional<std::size_t> burn_in;
  std::size_t thin = 1;
  std::uint64_t seed = 1;
  std::uint64_t stream_id = 0;
  double v0 = Hyperparameters{}.v0;
  std::string beta_backend = "auto";
  std::string alpha_update = std::string(to_string(SamplerSettings{}.alpha_update));

  void add(CLI::App* app, bool with_model = true) {
    if (with_model) app->add_option("--model", model, "ss, hs, dpss or dphs")->capture_default_str();
    app->add_option("--likelihood", likelihood, "gaussian or t")->capture_default_str();
    app->add_option("--nu", nu, "Student-t degrees of freedom")->capture_default_str();
    app->add_option("--iterations", iterations, "Gibbs iterations J")->capture_default_str();
    app->add_option("--burn-in", burn_in, "discarded iterations (default J/2)");
    app->add_option("--thin", thin, "keep every thin-th draw after burn-in")->capture_default_str();
    app->add_option("--seed", seed, "master seed")->capture_default_str();
    app->add_option("--stream-id", stream_id, "RNG stream of the chain")->capture_default_str();
    app->add_option("--v0", v0, "spike variance")->capture_default_str();
    app->add_option("--beta-backend", beta_backend, "direct, fast or auto")->capture_default_str();
    app->add_option("--alpha-update", alpha_update, "classical or verbatim")->capture_default_str();
  }

  ModelConfig config(const std::string& name) const {
    ModelConfig cfg;
    apply_model_name(name, cfg);
    cfg.likelihood = parse_likelihood(likelihood);
    cfg.nu = nu;
    cfg.hyper.v0 = v0;
    cfg.sampler.iterations = iterations;
    cfg.sampler.burn_in = burn_in;
    cfg.sampler.thin = thin;
    cfg.sampler.seed = seed;
    cfg.sampler.stream_id = stream_id;
    cfg.sampler.beta_backend = parse_backend(beta_backend);
    cfg.sampler.alpha_update = parse_alpha_update(alpha_update);
    cfg.validate();
    return cfg;
  }

  void record(Manifest& m, bool with_model = true) const {
    if (with_model) m.arg("model", model);
    m.arg("likelihood", likelihood);
    m.arg("nu", nu);
    m.arg("iterations", static_cast<std::uint64_t>(iterations));
    m.arg("burn-in", static_cast<std::uint64_t>(burn_in.value_or(iterations / 2)));
    m.arg("thin", static_cast<std::uint64_t>(thin));
    m.arg("seed", seed);
    m.arg("stream-id", stream_id);
    m.arg("v0", v0);
    m.arg("beta-backend", beta_backend);
    m.arg("alpha-update", alpha_update);
  }
};

struct DrawPaths {
  fs::path csv;
  fs::path meta;
};

DrawPaths resolve_draws(const fs::path& p) {
  if (fs::is_directory(p)) return {p / "draws.csv", p / "draws.meta"};
  fs::path meta = p;
  meta.replace_extension(".meta");
  return {p, meta};
}

// ---- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string scenario = "S2";
  std::size_t n = 0;
  std::size_t p = 0;
  std::string likelihood = "gaussian";
  double nu = 2.0;
  std::uint64_t seed = 1;
  fs::path out_dir = "dpvs_out";
};

void cmd_simulate(const SimulateArgs& a) {
  ScenarioSpec spec;
  spec.scenario = parse_scenario(a.scenario);
  spec.likelihood = parse_likelihood(a.likelihood);
  spec.nu = a.nu;
  spec.n = a.n;
  spec.p = a.p;
  spec.seed = a.seed;
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const Dataset data = gen_scenario(spec);
  write_csv(a.out_dir / "data.csv", data);
  KeyValueDoc truth = truth_document(*data.truth);
  truth.set("scenario", to_string(spec.scenario));
  truth.set("likelihood", to_string(spec.likelihood));
  truth.set("nu", spec.nu);
  truth.set("n", static_cast<std::uint64_t>(spec.n));
  truth.set("p", static_cast<std::uint64_t>(spec.p));
  truth.set("seed", spec.seed);
  truth.write(a.out_dir / "truth.txt", "dpvs synthetic ground truth");

  Manifest m("simulate");
  m.arg("scenario", a.scenario);
  m.arg("n", static_cast<std::uint64_t>(a.n));
  m.arg("p", static_cast<std::uint64_t>(a.p));
  m.arg("likelihood", a.likelihood);
  m.arg("nu", a.nu);
  m.arg("seed", a.seed);
  m.arg("out-dir", abs_path(a.out_dir));
  m.info("stream.design", std::uint64_t{1});
  m.info("stream.noise", std::uint64_t{2});
  m.info("output.data", abs_path(a.out_dir / "data.csv"));
  m.info("output.truth", abs_path(a.out_dir / "truth.txt"));
  m.write(a.out_dir);
  std::cout << "wrote " << (a.out_dir / "data.csv").string() << " (n=" << a.n << ", p=" << a.p
            << ", components=" << data.truth->num_components() << ")\n";
}

// ---- fit ---------------------------------------------------------------------

struct FitArgs {
  ModelArgs model;
  fs::path data;
  bool no_header = false;
  double memory_budget_mb = 1024.0;
  fs::path out_dir = "dpvs_out";
};

void cmd_fit(const FitArgs& a) {
  const ModelConfig cfg = a.model.config(a.model.model);
  const Dataset data = load_csv(a.data, !a.no_header);

  RunOptions opts;
  opts.memory_budget_bytes = static_cast<std::size_t>(a.memory_budget_mb * 1024.0 * 1024.0);
  opts.spill_path = a.out_dir / "draws.csv";
  factorization_counters().reset();
  const DrawStore draws = run_chain(data, cfg, opts);
  if (!draws.spilled_to) write_draws(a.out_dir / "draws.csv", draws);
  draws_metadata(draws).write(a.out_dir / "draws.meta", "dpvs draws metadata");

  Manifest m("fit");
  a.model.record(m);
  m.arg("data", abs_path(a.data));
  m.flag("no-header", a.no_header);
  m.arg("memory-budget-mb", a.memory_budget_mb);
  m.arg("out-dir", abs_path(a.out_dir));
  m.info("output.draws", abs_path(a.out_dir / "draws.csv"));
  m.info("output.meta", abs_path(a.out_dir / "draws.meta"));
  m.write(a.out_dir);

  std::cout << "model=" << model_name(cfg) << " n=" << data.n() << " p=" << data.p()
            << " backend=" << to_string(resolve_backend(cfg.sampler.beta_backend, data.n(), data.p())) << '\n'
            << "kept=" << draws.kept << (draws.spilled_to ? " (streamed to disk)" : "") << '\n'
            << "wall_seconds=" << draws.wall_seconds << '\n'
            << "factorizations_pxp=" << factorization_counters().coefficient_space.load()
            << " factorizations_nxn=" << factorization_counters().observation_space.load() << '\n';
}

// ---- select / evaluate -------------------------------------------------------

struct SelectArgs {
  fs::path draws;
  std::string method;  // empty: inclusion for spike-and-slab, credible_interval for horseshoe
  double zeta = 0.05;
  fs::path out_dir = "dpvs_out";
};

SelectionMethod chosen_method(const std::string& method, const DrawStore& d) {
  return method.empty() ? default_selection(d.config.prior) : parse_selection_method(method);
}

void write_selection(const fs::path& out_dir, const SelectionReport& rep, Eigen::Index p) {
  auto out = open_for_write(out_dir / "selection.csv");
  out << "index,";
  if (rep.method == SelectionMethod::credible_interval)
    out << "lower,upper";
  else if (rep.method == SelectionMethod::inclusion)
    out << "inclusion_prob";
  else
    out << "abs_mean";
  out << ",selected\n";
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const bool sel = std::find(rep.support.begin(), rep.support.end(), ju) != rep.support.end();
    out << j + 1 << ',';
    if (rep.method == SelectionMethod::credible_interval)
      out << format_double(rep.lower[ju]) << ',' << format_double(rep.upper[ju]);
    else
      out << format_double(rep.statistic[ju]);
    out << ',' << (sel ? 1 : 0) << '\n';
  }
  auto txt = open_for_write(out_dir / "selection.txt");
  txt << "# dpvs support selection\n" << rep.document();
}

void cmd_select(const SelectArgs& a) {
  const auto paths = resolve_draws(a.draws);
  const DrawStore d = read_draws(paths.csv, paths.meta);
  const SelectionMethod method = chosen_method(a.method, d);
  const auto rep = select_support(d, method, a.zeta);
  write_selection(a.out_dir, rep, d.p);

  Manifest m("select");
  m.arg("draws", abs_path(a.draws));
  m.arg("method", std::string(to_string(method)));
  m.arg("zeta", a.zeta);
  m.arg("out-dir", abs_path(a.out_dir));
  m.write(a.out_dir);
  std::cout << "method=" << to_string(method) << " selected=" << rep.support.size() << " of " << d.p << '\n';
}

struct EvaluateArgs {
  fs::path draws;
  fs::path truth;
  std::string method;
  double zeta = 0.05;
  fs::path out_dir = "dpvs_out";
};

void cmd_evaluate(const EvaluateArgs& a) {
  if (a.truth.empty()) throw UsageError("evaluate needs --truth (the sidecar written by simulate)");
  const auto paths = resolve_draws(a.draws);
  const DrawStore d = read_draws(paths.csv, paths.meta);
  const GroundTruth truth = read_truth(a.truth);
  if (truth.beta0.size() != d.p) throw UsageError("truth and draws disagree on p");
  const SelectionMethod method = chosen_method(a.method, d);
  const MetricsReport rep = evaluate(d, truth, method, a.zeta);
  KeyValueDoc doc = rep.document();
  doc.set("method", to_string(method));
  doc.set("zeta", a.zeta);
  doc.set("true_components", static_cast<std::uint64_t>(truth.num_components()));
  doc.write(a.out_dir / "metrics.txt", "dpvs metrics");
  if (rep.K) {
    auto out = open_for_write(a.out_dir / "k_histogram.csv");
    out << "K,probability\n";
    for (const auto& [k, prob] : rep.K->histogram) out << k << ',' << format_double(prob) << '\n';
  }

  Manifest m("evaluate");
  m.arg("draws", abs_path(a.draws));
  m.arg("truth", abs_path(a.truth));
  m.arg("method", std::string(to_string(method)));
  m.arg("zeta", a.zeta);
  m.arg("out-dir", abs_path(a.out_dir));
  m.write(a.out_dir);
  std::cout << "rel_error=" << rep.rel_error << " tp=" << rep.tp << " fp=" << rep.fp;
  if (rep.K) std::cout << " K_mode=" << rep.K->mode;
  std::cout << '\n';
}

// ---- network -----------------------------------------------------------------

struct NetworkArgs {
  ModelArgs model;
  fs::path data;
  bool genes_in_rows = false;
  std::string models = "dpss";
  fs::path gold;
  std::string network_name = "network";
  double threshold = 0.1;
  std::size_t workers = 1;
  fs::path out_dir = "dpvs_out";
};

bool cmd_network(const NetworkArgs& a) {
  const auto expr = load_expression_matrix(
      a.data, a.genes_in_rows ? Orientation::genes_in_rows : Orientation::samples_in_rows);
  std::optional<Eigen::MatrixXd> gold;
  if (!a.gold.empty()) gold = load_gold_standard(a.gold, expr.genes);

  Manifest m("network");
  a.model.record(m, false);
  m.arg("data", abs_path(a.data));
  m.flag("genes-in-rows", a.genes_in_rows);
  m.arg("model", a.models);
  if (!a.gold.empty()) m.arg("gold", abs_path(a.gold));
  m.arg("network-name", a.network_name);
  m.arg("threshold", a.threshold);
  m.arg("workers", static_cast<std::uint64_t>(a.workers));
  m.arg("out-dir", abs_path(a.out_dir));

  const auto names = split_list(a.models);
  if (names.empty()) throw UsageError("--model lists no models");
  std::map<std::pair<std::string, std::string>, double> losses;
  std::string failures;
  for (const auto& name : names) {
    const ModelConfig cfg = a.model.config(name);
    const NetworkResult res = run_network(expr, cfg, a.threshold, a.workers);
    write_matrix_csv(a.out_dir / ("edges_" + name + ".csv"), res.prob, expr.genes);
    for (std::size_t g = 0; g < res.stream_ids.size(); ++g)
      m.info("stream." + name + "." + expr.genes[g], res.stream_ids[g]);
    for (const auto& [gene, msg] : res.failures)
      failures += name + '\t' + expr.genes[gene] + '\t' + msg + '\n';
    if (gold) losses[{a.network_name, name}] = log_loss(res.prob, *gold);
  }
  if (gold) {
    auto out = open_for_write(a.out_dir / "log_loss.tsv");
    out << log_loss_table({a.network_name}, names, losses);
    for (const auto& [key, value] : losses) std::cout << key.second << " log_loss=" << value << '\n';
  }
  if (!failures.empty()) {
    auto out = open_for_write(a.out_dir / "failures.tsv");
    out << "model\tgene\terror\n" << failures;
    std::cerr << "some per-gene fits failed; see " << (a.out_dir / "failures.tsv").string() << '\n';
  }
  m.write(a.out_dir);
  std::cout << "genes=" << expr.genes.size() << " samples=" << expr.values.cols() << '\n';
  return failures.empty();
}

// ---- sweep -------------------------------------------------------------------

struct SweepArgs {
  ModelArgs model;
  std::string scenario = "S2";
  std::size_t n = 0;
  std::size_t p = 0;
  std::string models = "dpss,ss,dphs,hs";
  std::size_t replicates = 10;
  double zeta = 0.05;
  std::size_t workers = 1;
  fs::path out_dir = "dpvs_out";
};

void cmd_sweep(const SweepArgs& a) {
  SweepPlan plan;
  plan.scenario.scenario = parse_scenario(a.scenario);
  plan.scenario.likelihood = parse_likelihood(a.model.likelihood);
  plan.scenario.nu = a.model.nu;
  plan.scenario.n = a.n;
  plan.scenario.p = a.p;
  try {
    plan.scenario.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const auto names = split_list(a.models);
  if (names.empty()) throw UsageError("--models lists no models");
  for (const auto& name : names) plan.models.push_back(a.model.config(name));
  for (std::size_t r = 0; r < a.replicates; ++r) plan.seeds.push_back(a.model.seed + r);
  plan.zeta = a.zeta;
  plan.workers = a.workers;
  const auto results = run_sweep(plan);

  {
    auto out = open_for_write(a.out_dir / "replicates.csv");
    out << sweep_table(results);
  }
  sweep_summary(results).write(a.out_dir / "summary.txt", "dpvs replicate sweep medians");

  Manifest m("sweep");
  a.model.record(m, false);
  m.arg("scenario", a.scenario);
  m.arg("n", static_cast<std::uint64_t>(a.n));
  m.arg("p", static_cast<std::uint64_t>(a.p));
  m.arg("models", a.models);
  m.arg("replicates", static_cast<std::uint64_t>(a.replicates));
  m.arg("zeta", a.zeta);
  m.arg("workers", static_cast<std::uint64_t>(a.workers));
  m.arg("out-dir", abs_path(a.out_dir));
  for (const auto& r : results) m.info("stream." + r.model + ".seed" + std::to_string(r.seed), r.stream_id);
  m.write(a.out_dir);
  std::cout << sweep_summary(results).str();
}

// ---- dispatch ----------------------------------------------------------------

int run(std::vector<std::string> args);

int cmd_replay(const fs::path& manifest, const std::string& out_dir) {
  const auto doc = KeyValueDoc::read(manifest);
  std::vector<std::string> args{"dpvs", doc.get("command")};
  if (args[1] == "replay") throw UsageError("a replay manifest cannot be replayed");
  for (const auto& [key, value] : doc.entries()) {
    if (!key.starts_with("arg.")) continue;
    const std::string flag = key.substr(4);
    if (flag == "out-dir" && !out_dir.empty()) continue;
    if (value == "true" || value == "false") {
      if (value == "true") args.push_back("--" + flag);
      continue;
    }
    args.push_back("--" + flag);
    args.push_back(value);
  }
  if (!out_dir.empty()) {
    args.emplace_back("--out-dir");
    args.push_back(out_dir);
  }
  return run(std::move(args));
}

int run(std::vector<std::string> args) {
  CLI::App app{"Dirichlet-process heteroskedastic sparse regression (spike-and-slab / horseshoe)"};
  app.set_version_flag("--version", std::string(DPVS_VERSION));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "generate a synthetic scenario");
  s->add_option("--scenario", sim.scenario, "S1 or S2")->capture_default_str();
  s->add_option("--n", sim.n, "observations")->required();
  s->add_option("--p", sim.p, "predictors")->required();
  s->add_option("--likelihood", sim.likelihood, "gaussian or t")->capture_default_str();
  s->add_option("--nu", sim.nu, "Student-t degrees of freedom")->capture_default_str();
  s->add_option("--seed", sim.seed, "seed")->capture_default_str();
  s->add_option("--out-dir", sim.out_dir, "output directory")->capture_default_str();

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "run a Gibbs chain on a data CSV");
  fit.model.add(f);
  f->add_option("--data", fit.data, "CSV, last column is the response")->required();
  f->add_flag("--no-header", fit.no_header, "the CSV has no header row");
  f->add_option("--memory-budget-mb", fit.memory_budget_mb, "stream draws to disk above this size")
      ->capture_default_str();
  f->add_option("--out-dir", fit.out_dir, "output directory")->capture_default_str();

  SelectArgs sel;
  auto* se = app.add_subcommand("select", "support recovery from draws");
  se->add_option("--draws", sel.draws, "fit output directory or draws.csv")->required();
  se->add_option("--method", sel.method, "inclusion, credible_interval or magnitude_threshold");
  se->add_option("--zeta", sel.zeta, "level")->capture_default_str();
  se->add_option("--out-dir", sel.out_dir, "output directory")->capture_default_str();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "metrics against a synthetic ground truth");
  e->add_option("--draws", ev.draws, "fit output directory or draws.csv")->required();
  e->add_option("--truth", ev.truth, "truth sidecar from simulate");
  e->add_option("--method", ev.method, "inclusion, credible_interval or magnitude_threshold");
  e->add_option("--zeta", ev.zeta, "level")->capture_default_str();
  e->add_option("--out-dir", ev.out_dir, "output directory")->capture_default_str();

  NetworkArgs net;
  auto* nw = app.add_subcommand("network", "per-gene regressions into an edge-probability matrix");
  net.model.add(nw, false);
  nw->add_option("--data", net.data, "expression matrix (tab or comma separated)")->required();
  nw->add_flag("--genes-in-rows", net.genes_in_rows, "one gene per line, name first, no header");
  nw->add_option("--model", net.models, "comma-separated models")->capture_default_str();
  nw->add_option("--gold", net.gold, "gold standard: 'regulator target 0|1' lines");
  nw->add_option("--network-name", net.network_name, "row label in log_loss.tsv")->capture_default_str();
  nw->add_option("--threshold", net.threshold, "|beta| cut for horseshoe edges")->capture_default_str();
  nw->add_option("--workers", net.workers, "parallel gene fits")->capture_default_str();
  nw->add_option("--out-dir", net.out_dir, "output directory")->capture_default_str();

  SweepArgs sw;
  auto* sp = app.add_subcommand("sweep", "seeded replicates of simulate + fit + evaluate");
  sw.model.add(sp, false);
  sp->add_option("--scenario", sw.scenario, "S1 or S2")->capture_default_str();
  sp->add_option("--n", sw.n, "observations")->required();
  sp->add_option("--p", sw.p, "predictors")->required();
  sp->add_option("--models", sw.models, "comma-separated models")->capture_default_str();
  sp->add_option("--replicates", sw.replicates, "seeds seed..seed+R-1")->capture_default_str();
  sp->add_option("--zeta", sw.zeta, "level")->capture_default_str();
  sp->add_option("--workers", sw.workers, "parallel replicates")->capture_default_str();
  sp->add_option("--out-dir", sw.out_dir, "output directory")->capture_default_str();

  fs::path manifest;
  std::string replay_out;
  auto* rp = app.add_subcommand("replay", "re-run a command from its manifest");
  rp->add_option("--manifest", manifest, "manifest.txt written by any command")->required();
  rp->add_option("--out-dir", replay_out, "write outputs here instead of the recorded directory");

  try {
    args.erase(args.begin());
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  if (*s) cmd_simulate(sim);
  else if (*f) cmd_fit(fit);
  else if (*se) cmd_select(sel);
  else if (*e) cmd_evaluate(ev);
  else if (*nw) return cmd_network(net) ? 0 : kNumerical;
  else if (*sp) cmd_sweep(sw);
  else if (*rp) return cmd_replay(manifest, replay_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv, argv + argc));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const dpvs::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
