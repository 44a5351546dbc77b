#include "subscan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "subscan/errors.hpp"
#include "subscan/parallel.hpp"
#include "subscan/random.hpp"
#include "subscan/scanstats.hpp"

namespace subscan {

namespace {
constexpr std::uint64_t kDrawStream = 0x44524157;       // "DRAW"
constexpr std::uint64_t kPositiveStream = 0x504f5354;   // "POST"
constexpr std::uint64_t kNegativeStream = 0x4e454754;   // "NEGT"
constexpr std::uint64_t kFixtureStream = 0x46495854;    // "FIXT"

void require_same_width(const ActivationMatrix& background, const ActivationMatrix& pool,
                        const char* name) {
  if (pool.num_nodes() != background.num_nodes()) {
    throw DimensionError(std::string(name) + " pool has " + std::to_string(pool.num_nodes()) +
                         " nodes but background has " + std::to_string(background.num_nodes()));
  }
}

std::vector<std::size_t> draw(Rng& rng, std::size_t population, std::size_t count,
                              bool with_replacement, const char* name) {
  if (with_replacement) return rng.sample_with_replacement(population, count);
  if (count > population) {
    throw ValidationError(std::string(name) + " pool has " + std::to_string(population) +
                          " rows; a without-replacement draw needs " + std::to_string(count));
  }
  return rng.sample_without_replacement(population, count);
}

// Stacks selected rows of two p-value matrices (same width and background).
PValueMatrix stack(const PValueMatrix& first, std::span<const std::size_t> first_rows,
                   const PValueMatrix& second, std::span<const std::size_t> second_rows) {
  const std::size_t cols = first.cols();
  std::vector<double> values;
  values.reserve((first_rows.size() + second_rows.size()) * cols);
  for (auto r : first_rows) {
    const auto row = first.values().row(r);
    values.insert(values.end(), row.begin(), row.end());
  }
  for (auto r : second_rows) {
    const auto row = second.values().row(r);
    values.insert(values.end(), row.begin(), row.end());
  }
  const std::size_t rows = first_rows.size() + second_rows.size();
  return PValueMatrix(Matrix(rows, cols, std::move(values)), first.background_size(),
                      first.layer_id());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(proportion >= 0.0 && proportion <= 1.0)) {
    throw ValidationError("proportion = " + std::to_string(proportion) + " is outside [0, 1]");
  }
  if (group_size == 0) throw ValidationError("group_size must be positive");
  if (trials == 0) throw ValidationError("trials must be positive");
  scan_config.validate();
}

std::size_t ExperimentConfig::anomalous_count() const {
  return static_cast<std::size_t>(std::floor(proportion * static_cast<double>(group_size) + 0.5));
}

double auroc(std::span<const double> positive, std::span<const double> negative) {
  if (positive.empty() || negative.empty()) {
    throw ValidationError("auroc needs non-empty positive and negative score lists");
  }
  double credit = 0.0;
  for (const double p : positive) {
    for (const double n : negative) {
      if (p > n) credit += 1.0;
      else if (p == n) credit += 0.5;
    }
  }
  return credit / (static_cast<double>(positive.size()) * static_cast<double>(negative.size()));
}

PowerReport run_power_experiment(const ActivationMatrix& background,
                                 const ActivationMatrix& normal_pool,
                                 const ActivationMatrix& anomalous_pool,
                                 const ExperimentConfig& config) {
  config.validate();
  require_same_width(background, normal_pool, "normal");
  require_same_width(background, anomalous_pool, "anomalous");

  const std::size_t group = config.group_size;
  const std::size_t anomalous = config.anomalous_count();
  if (!config.with_replacement) {
    if (normal_pool.num_samples() < group) {
      throw ValidationError("normal pool has " + std::to_string(normal_pool.num_samples()) +
                            " rows, fewer than group_size " + std::to_string(group));
    }
    if (anomalous_pool.num_samples() < anomalous) {
      throw ValidationError("anomalous pool has " + std::to_string(anomalous_pool.num_samples()) +
                            " rows, fewer than the " + std::to_string(anomalous) +
                            " anomalous rows per group");
    }
  }

  // p-values are per cell, so scoring whole pools once equals scoring each drawn group.
  const PValueMatrix normal_p = empirical_pvalues(background, normal_pool);
  const PValueMatrix anomalous_p = empirical_pvalues(background, anomalous_pool);

  PowerReport report;
  report.mode = PowerReport::Mode::kGroup;
  report.anomalous_count = anomalous;
  report.config = config;
  report.positive_scores.resize(config.trials);
  report.negative_scores.resize(config.trials);
  report.positive_cardinalities.resize(config.trials);
  report.negative_cardinalities.resize(config.trials);

  parallel_for(config.trials, [&](std::size_t trial) {
    Rng rng(derive_seed(config.seed, kDrawStream, trial));
    const auto pos_anomalous =
        draw(rng, anomalous_pool.num_samples(), anomalous, config.with_replacement, "anomalous");
    const auto pos_normal =
        draw(rng, normal_pool.num_samples(), group - anomalous, config.with_replacement, "normal");
    const auto neg_normal =
        draw(rng, normal_pool.num_samples(), group, config.with_replacement, "normal");

    const PValueMatrix positive = stack(anomalous_p, pos_anomalous, normal_p, pos_normal);
    const PValueMatrix negative = stack(normal_p, neg_normal, normal_p, {});

    ScanConfig pos_config = config.scan_config;
    pos_config.seed = derive_seed(config.seed, kPositiveStream, trial);
    ScanConfig neg_config = config.scan_config;
    neg_config.seed = derive_seed(config.seed, kNegativeStream, trial);

    const ScanResult pos = scan(positive, pos_config);
    const ScanResult neg = scan(negative, neg_config);
    report.positive_scores[trial] = pos.score;
    report.negative_scores[trial] = neg.score;
    report.positive_cardinalities[trial] = {pos.sample_indices.size(), pos.node_indices.size()};
    report.negative_cardinalities[trial] = {neg.sample_indices.size(), neg.node_indices.size()};
  });

  report.auroc = auroc(report.positive_scores, report.negative_scores);
  return report;
}

PowerReport run_individual_experiment(const ActivationMatrix& background,
                                      const ActivationMatrix& normal_pool,
                                      const ActivationMatrix& anomalous_pool,
                                      const ExperimentConfig& config) {
  config.validate();
  require_same_width(background, normal_pool, "normal");
  require_same_width(background, anomalous_pool, "anomalous");

  const auto positive = scan_individual(empirical_pvalues(background, anomalous_pool),
                                        config.scan_config);
  const auto negative = scan_individual(empirical_pvalues(background, normal_pool),
                                        config.scan_config);

  PowerReport report;
  report.mode = PowerReport::Mode::kIndividual;
  report.config = config;
  for (const auto& r : positive) {
    report.positive_scores.push_back(r.score);
    report.positive_cardinalities.push_back({r.sample_indices.size(), r.node_indices.size()});
  }
  for (const auto& r : negative) {
    report.negative_scores.push_back(r.score);
    report.negative_cardinalities.push_back({r.sample_indices.size(), r.node_indices.size()});
  }
  report.auroc = auroc(report.positive_scores, report.negative_scores);
  return report;
}

Fixture make_synthetic_fixture(const FixtureParams& params) {
  if (params.num_background == 0 || params.num_normal == 0 || params.num_anomalous == 0 ||
      params.num_nodes == 0) {
    throw ValidationError("synthetic fixture sizes must all be positive");
  }
  if (params.affected_nodes > params.num_nodes) {
    throw ValidationError("affected_nodes = " + std::to_string(params.affected_nodes) +
                          " exceeds num_nodes = " + std::to_string(params.num_nodes));
  }
  if (!std::isfinite(params.shift)) throw ValidationError("shift must be finite");

  auto gaussian = [&](std::size_t rows, std::uint64_t stream, double shift) {
    Rng rng(derive_seed(params.seed, kFixtureStream, stream));
    Matrix m(rows, params.num_nodes);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < params.num_nodes; ++c) {
        // Stored values go through binary32 on disk; round now so that
        // in-memory and file-backed runs agree exactly.
        const double v = rng.normal() + (c < params.affected_nodes ? shift : 0.0);
        m(r, c) = static_cast<double>(static_cast<float>(v));
      }
    }
    return m;
  };

  return Fixture{
      ActivationMatrix(gaussian(params.num_background, 0, 0.0), "synthetic"),
      ActivationMatrix(gaussian(params.num_normal, 1, 0.0), "synthetic"),
      ActivationMatrix(gaussian(params.num_anomalous, 2, params.shift), "synthetic"),
  };
}

namespace {

// Linear interpolation between closest ranks on a sorted sample.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<CardinalityRow> cardinality_report(std::span<const Cardinality> results,
                                               const std::string& label) {
  if (results.empty()) throw ValidationError("cardinality_report: no results");
  std::vector<CardinalityRow> rows;
  std::vector<double> samples, nodes;
  for (std::size_t i = 0; i < results.size(); ++i) {
    rows.push_back({label, std::to_string(i), static_cast<double>(results[i].samples),
                    static_cast<double>(results[i].nodes)});
    samples.push_back(static_cast<double>(results[i].samples));
    nodes.push_back(static_cast<double>(results[i].nodes));
  }
  std::sort(samples.begin(), samples.end());
  std::sort(nodes.begin(), nodes.end());
  const std::pair<const char*, double> stats[] = {
      {"min", 0.0}, {"q25", 0.25}, {"median", 0.5}, {"q75", 0.75}, {"max", 1.0}};
  for (const auto& [name, q] : stats) {
    rows.push_back({label, name, quantile(samples, q), quantile(nodes, q)});
  }
  const double n = static_cast<double>(results.size());
  rows.push_back({label, "mean", std::accumulate(samples.begin(), samples.end(), 0.0) / n,
                  std::accumulate(nodes.begin(), nodes.end(), 0.0) / n});
  return rows;
}

std::vector<CardinalityRow> cardinality_report(std::span<const ScanResult> results,
                                               const std::string& label) {
  std::vector<Cardinality> sizes;
  sizes.reserve(results.size());
  for (const auto& r : results) sizes.push_back({r.sample_indices.size(), r.node_indices.size()});
  return cardinality_report(sizes, label);
}

std::string cardinality_csv(std::span<const CardinalityRow> rows) {
  std::ostringstream out;
  out << "label,entry,sample_cardinality,node_cardinality\n";
  char buf[64];
  for (const auto& row : rows) {
    out << row.label << ',' << row.entry << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.sample_cardinality);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", row.node_cardinality);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace subscan
