#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subscan/ltss.hpp"
#include "subscan/matrix.hpp"

namespace subscan {

struct ExperimentConfig {
  double proportion = 0.0;  // fraction of anomalous rows in a positive group
  std::size_t group_size = 20;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  ScanConfig scan_config{};
  bool with_replacement = false;

  void validate() const;
  /// round-half-up(proportion * group_size)
  std::size_t anomalous_count() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct Cardinality {
  std::size_t samples = 0;
  std::size_t nodes = 0;

  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct PowerReport {
  enum class Mode { kGroup, kIndividual };

  Mode mode = Mode::kGroup;
  std::vector<double> positive_scores;
  std::vector<double> negative_scores;
  std::vector<Cardinality> positive_cardinalities;
  std::vector<Cardinality> negative_cardinalities;
  double auroc = 0.5;
  std::size_t anomalous_count = 0;  // per positive group; group mode only
  ExperimentConfig config{};

  friend bool operator==(const PowerReport&, const PowerReport&) = default;
};

/// Mann-Whitney AUROC with half credit for ties.
double auroc(std::span<const double> positive, std::span<const double> negative);

/// Per trial, scans one group with round(proportion * group_size) anomalous
/// rows and one all-normal group, both against `background`.
PowerReport run_power_experiment(const ActivationMatrix& background,
                                 const ActivationMatrix& normal_pool,
                                 const ActivationMatrix& anomalous_pool,
                                 const ExperimentConfig& config);

/// Scans every pool row on its own; AUROC of anomalous-row scores against
/// normal-row scores.
PowerReport run_individual_experiment(const ActivationMatrix& background,
                                      const ActivationMatrix& normal_pool,
                                      const ActivationMatrix& anomalous_pool,
                                      const ExperimentConfig& config);

struct FixtureParams {
  std::size_t num_background = 250;
  std::size_t num_normal = 100;
  std::size_t num_anomalous = 100;
  std::size_t num_nodes = 64;
  std::size_t affected_nodes = 16;
  double shift = 3.0;
  std::uint64_t seed = 0;
};

struct Fixture {
  ActivationMatrix background;
  ActivationMatrix normal;
  ActivationMatrix anomalous;
};

/// Standard-normal background and normal rows; anomalous rows are drawn the
/// same way with +shift added to the first `affected_nodes` columns.
Fixture make_synthetic_fixture(const FixtureParams& params);

struct CardinalityRow {
  std::string label;
  std::string entry;  // result index, or a summary statistic name
  double sample_cardinality = 0.0;
  double node_cardinality = 0.0;
};

/// Per-result cardinalities followed by min/q25/median/q75/max/mean rows.
std::vector<CardinalityRow> cardinality_report(std::span<const Cardinality> results,
                                               const std::string& label);
std::vector<CardinalityRow> cardinality_report(std::span<const ScanResult> results,
                                               const std::string& label);

/// Columns: label,entry,sample_cardinality,node_cardinality
std::string cardinality_csv(std::span<const CardinalityRow> rows);

}  // namespace subscan
