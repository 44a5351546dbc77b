#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subscan/matrix.hpp"
#include "subscan/scanstats.hpp"

namespace subscan {

/// How the threshold grid is built: `linspace:n` gives k/(n+1) for k = 1..n;
/// `empirical` uses the distinct p-values present in the data.
struct AlphaGridSpec {
  enum class Kind { kLinspace, kEmpirical };
  Kind kind = Kind::kLinspace;
  std::size_t count = 100;

  static AlphaGridSpec parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const AlphaGridSpec&, const AlphaGridSpec&) = default;
};

struct ScanConfig {
  AlphaGridSpec alpha_grid{};
  double alpha_max = 1.0;
  std::size_t restarts = 10;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

/// Non-empty, strictly increasing thresholds in (0, alpha_max].
std::vector<double> resolve_alpha_grid(const ScanConfig& config, const PValueMatrix& pvalues);

struct ScanResult {
  double score = 0.0;
  std::vector<std::size_t> sample_indices;
  std::vector<std::size_t> node_indices;
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t n_alpha = 0;
  std::size_t iterations_used = 0;
  std::size_t restart_index = 0;

  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

/// Fraction of p-values at or below `threshold`.
double priority(std::span<const double> element_pvalues, double threshold);

/// Best subset of rows (elements) for a matrix whose columns are already fixed.
struct RowSubset {
  double score = 0.0;
  std::vector<std::size_t> rows;  // ascending
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t n_alpha = 0;
};

/// LTSS search over rows: for each threshold, rows are ranked by priority
/// (ties by ascending index) and every top-k prefix is scored. Exact over all
/// 2^rows subsets at each threshold. Ties keep the first (smaller threshold,
/// then shorter prefix).
RowSubset optimize_rows(const Matrix& pvalues, std::span<const double> alpha_grid);

/// Group scan: alternating LTSS ascent over samples and nodes with random
/// restarts. Deterministic for a given seed.
ScanResult scan(const PValueMatrix& pvalues, const ScanConfig& config);
ScanResult scan(const PValueMatrix& pvalues, const ScanConfig& config,
                std::span<const double> alpha_grid);

/// One result per sample: the best node subset for that sample alone.
std::vector<ScanResult> scan_individual(const PValueMatrix& pvalues, const ScanConfig& config);

/// Exhaustive search over all (sample subset, node subset) pairs. Refuses
/// inputs with more than 12 samples or 12 nodes.
ScanResult brute_force_scan(const PValueMatrix& pvalues, std::span<const double> alpha_grid);

inline constexpr std::size_t kBruteForceLimit = 12;

}  // namespace subscan

namespace subscan {

/// One restart of the alternating ascent, exposed so tests can inspect the
/// score sequence. `step_scores` holds the score after every half-step.
struct Ascent {
  ScanResult result;
  std::vector<double> step_scores;
};

Ascent ascend(const PValueMatrix& pvalues, std::span<const double> alpha_grid,
              std::vector<std::size_t> initial_nodes, std::size_t max_iterations);

}  // namespace subscan
