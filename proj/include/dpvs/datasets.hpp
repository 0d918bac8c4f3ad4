#pragma once

// Regression datasets: synthetic scenarios, centering, CSV ingestion and
// expression-matrix ingestion.
//
// File conventions
//   data CSV     : comma-separated, optional header, last column is the response.
//   truth sidecar: key=value lines (scenario, likelihood, nu, n, p, seed,
//                  components, component_variances, variance_labels, beta0);
//                  lists are comma-separated, labels are 0-based component ids.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dpvs/config.hpp"
#include "dpvs/errors.hpp"
#include "dpvs/rand_core.hpp"
#include "dpvs/text_io.hpp"

namespace dpvs {

struct GroundTruth {
  Eigen::VectorXd beta0;
  std::vector<std::size_t> variance_labels;  // component id per observation
  std::vector<double> component_variances;   // indexed by component id

  std::size_t num_components() const { return component_variances.size(); }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (Eigen::Index j = 0; j < beta0.size(); ++j)
      if (beta0[j] != 0.0) s.push_back(static_cast<std::size_t>(j));
    return s;
  }
};

struct Dataset {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  std::optional<GroundTruth> truth;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Subtracts the mean from y and from every column of X.
inline void center(Dataset& data) {
  if (data.y.size() == 0) return;
  data.y.array() -= data.y.mean();
  const Eigen::RowVectorXd means = data.X.colwise().mean();
  data.X.rowwise() -= means;
}

// ---- synthetic data --------------------------------------------------------

/// Sparse coefficients: ceil(0.28 p) nonzeros rounded to the nearest multiple
/// of 7 (at least one block), laid out as equally spaced blocks of seven with
/// values 1, 4, 9, 16, 9, 4, 1.
inline Eigen::VectorXd gen_beta0(std::size_t p) {
  constexpr std::size_t block = 7;
  if (p < block) throw std::domain_error("p = " + std::to_string(p) + " cannot host a block of 7");
  const double target = std::ceil(0.28 * static_cast<double>(p));
  std::size_t blocks = static_cast<std::size_t>(std::llround(target / block));
  blocks = std::clamp<std::size_t>(blocks, 1, p / block);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  const double segment = static_cast<double>(p) / static_cast<double>(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    auto center_idx = static_cast<std::ptrdiff_t>(std::floor((static_cast<double>(b) + 0.5) * segment));
    const std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(center_idx - 3, static_cast<std::ptrdiff_t>(b * block),
                                                         static_cast<std::ptrdiff_t>(p - (blocks - b) * block));
    for (std::ptrdiff_t h = 0; h < 7; ++h) {
      const double d = 4.0 - static_cast<double>(std::abs(h - 3));
      beta[lo + h] = d * d;
    }
  }
  return beta;
}

enum class Scenario { S1, S2 };

inline std::string_view to_string(Scenario s) { return s == Scenario::S1 ? "S1" : "S2"; }
inline Scenario parse_scenario(std::string_view s) {
  if (s == "S1" || s == "s1" || s == "1") return Scenario::S1;
  if (s == "S2" || s == "s2" || s == "2") return Scenario::S2;
  throw ConfigError("unknown scenario '" + std::string(s) + "'");
}

struct ScenarioSpec {
  Scenario scenario = Scenario::S1;
  LikelihoodKind likelihood = LikelihoodKind::gaussian;
  double nu = 2.0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 1) throw ConfigError("scenario needs n >= 1");
    if (p < 7) throw ConfigError("scenario needs p >= 7 to host the coefficient pattern");
    if (likelihood == LikelihoodKind::student_t && !(nu > 0.0))
      throw ConfigError("student-t noise needs nu > 0");
  }
};

/// Outliers in scenario 2: none below n = 50, otherwise round(n / 50) capped at 4.
inline std::size_t outlier_count(std::size_t n) {
  if (n < 50) return 0;
  return std::min<std::size_t>(4, static_cast<std::size_t>(std::llround(static_cast<double>(n) / 50.0)));
}

inline constexpr double kScenario2Variances[] = {0.5, 1.0, 1.5, 2.0, 2.5};
inline constexpr double kOutlierVariance = 10.0;

inline Dataset gen_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(spec.p);

  GroundTruth truth;
  truth.beta0 = gen_beta0(spec.p);
  truth.variance_labels.assign(spec.n, 0);
  if (spec.scenario == Scenario::S1) {
    truth.component_variances = {1.0};
  } else {
    const std::size_t shared = std::min<std::size_t>(5, spec.n);
    truth.component_variances.assign(std::begin(kScenario2Variances),
                                     std::begin(kScenario2Variances) + shared);
    for (std::size_t i = 0; i < spec.n; ++i) truth.variance_labels[i] = i % 5;
    const std::size_t outliers = outlier_count(spec.n);
    for (std::size_t k = 0; k < outliers; ++k) {
      truth.variance_labels[spec.n - outliers + k] = truth.component_variances.size();
      truth.component_variances.push_back(kOutlierVariance);
    }
  }

  RngStream design_rng(spec.seed, 1);
  RngStream noise_rng(spec.seed, 2);
  Dataset data;
  data.X.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = design_rng.standard_normal();

  Eigen::VectorXd noise(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double var = truth.component_variances[truth.variance_labels[static_cast<std::size_t>(i)]];
    noise[i] = spec.likelihood == LikelihoodKind::gaussian
                   ? sample_normal(0.0, var, noise_rng)
                   : sample_student_t(0.0, var, spec.nu, noise_rng);
  }
  data.y = data.X * truth.beta0 + noise;
  data.truth = std::move(truth);
  center(data);
  return data;
}

// ---- CSV -------------------------------------------------------------------

inline void write_csv(const std::filesystem::path& path, const Dataset& data, bool header = true) {
  auto out = open_for_write(path);
  if (header) {
    for (Eigen::Index j = 0; j < data.p(); ++j) out << "x_" << (j + 1) << ',';
    out << "y\n";
  }
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) out << format_double(data.X(i, j)) << ',';
    out << format_double(data.y[i]) << '\n';
  }
}

/// Rectangular numeric table, last column = response. Centering is applied
/// unless `center_data` is false.
inline Dataset load_csv(const std::filesystem::path& path, bool has_header, bool center_data = true) {
  const auto lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split(lines[i], ',');
    if (width == 0) {
      if (fields.size() < 2) throw ParseError("need at least one predictor and a response", i + 1);
      width = fields.size();
    } else if (fields.size() != width) {
      throw ParseError("ragged row: expected " + std::to_string(width) + " fields, got " +
                           std::to_string(fields.size()),
                       i + 1);
    }
    std::vector<double> row;
    row.reserve(width);
    for (auto f : fields) row.push_back(parse_finite(f, i + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows in " + path.string(), 0);

  Dataset data;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(width - 1);
  data.X.resize(n, p);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) data.X(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    data.y[i] = rows[static_cast<std::size_t>(i)].back();
  }
  if (center_data) center(data);
  return data;
}

// ---- truth sidecar ---------------------------------------------------------

inline KeyValueDoc truth_document(const GroundTruth& truth) {
  KeyValueDoc doc;
  doc.set("components", static_cast<std::uint64_t>(truth.num_components()));
  doc.set("component_variances", join_doubles(truth.component_variances));
  std::string labels;
  for (std::size_t i = 0; i < truth.variance_labels.size(); ++i)
    labels += (i ? "," : "") + std::to_string(truth.variance_labels[i]);
  doc.set("variance_labels", labels);
  doc.set("beta0", join_doubles(truth.beta0));
  return doc;
}

inline GroundTruth read_truth(const std::filesystem::path& path) {
  const auto doc = KeyValueDoc::read(path);
  GroundTruth truth;
  const auto beta = parse_double_list(doc.get("beta0"));
  truth.beta0 = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  truth.component_variances = parse_double_list(doc.get("component_variances"));
  for (auto tok : split(doc.get("variance_labels"), ','))
    if (!tok.empty()) truth.variance_labels.push_back(parse_u64(tok));
  if (doc.get_u64("components") != truth.component_variances.size())
    throw ParseError("truth sidecar: component count does not match the variance list", 0);
  return truth;
}

// ---- expression matrices ---------------------------------------------------

struct ExpressionMatrix {
  Eigen::MatrixXd values;  // genes x samples
  std::vector<std::string> genes;
};

enum class Orientation {
  samples_in_rows,  // header row of gene names, one sample per line
  genes_in_rows,    // no header; each line is a gene name followed by its samples
};

/// Tab- or comma-separated expression table (the delimiter is taken from the first line).
inline ExpressionMatrix load_expression_matrix(const std::filesystem::path& path,
                                               Orientation orientation = Orientation::samples_in_rows) {
  const auto lines = read_lines(path);
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw ParseError("empty expression file " + path.string(), 0);
  const char delim = lines[first].find('\t') != std::string::npos ? '\t' : ',';

  ExpressionMatrix out;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  auto strip_quotes = [](std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
  };

  std::size_t start = first;
  if (orientation == Orientation::samples_in_rows) {
    for (auto tok : split(lines[first], delim)) out.genes.push_back(strip_quotes(tok));
    width = out.genes.size();
    start = first + 1;
  }
  for (std::size_t i = start; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto fields = split(lines[i], delim);
    std::size_t offset = 0;
    if (orientation == Orientation::genes_in_rows) {
      out.genes.push_back(strip_quotes(fields.front()));
      offset = 1;
    }
    const std::size_t count = fields.size() - offset;
    if (width == 0 && orientation == Orientation::genes_in_rows) width = count;
    if (count != width)
      throw ParseError("ragged row: expected " + std::to_string(width) + " values, got " +
                           std::to_string(count),
                       i + 1);
    std::vector<double> row;
    for (std::size_t f = offset; f < fields.size(); ++f) row.push_back(parse_finite(fields[f], i + 1));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no expression values in " + path.string(), 0);

  std::set<std::string> seen;
  for (const auto& g : out.genes)
    if (!seen.insert(g).second) throw ParseError("duplicate gene name '" + g + "'", first + 1);

  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(width);
  Eigen::MatrixXd table(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) table(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  out.values = orientation == Orientation::samples_in_rows ? Eigen::MatrixXd(table.transpose()) : table;
  return out;
}

}  // namespace dpvs
