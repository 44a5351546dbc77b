#include "subscan/ltss.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "subscan/errors.hpp"
#include "subscan/parallel.hpp"
#include "subscan/random.hpp"

namespace subscan {

namespace {
constexpr std::uint64_t kRestartStream = 0x52455354;  // "REST"
}

AlphaGridSpec AlphaGridSpec::parse(const std::string& text) {
  if (text == "empirical") return {Kind::kEmpirical, 0};
  const std::string prefix = "linspace:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      try {
        const auto n = std::stoull(digits);
        if (n >= 1) return {Kind::kLinspace, static_cast<std::size_t>(n)};
      } catch (const std::exception&) {
      }
    }
  }
  throw ValidationError("alpha grid '" + text + "' is not 'linspace:<n>' (n >= 1) or 'empirical'");
}

std::string AlphaGridSpec::to_string() const {
  return kind == Kind::kEmpirical ? "empirical" : "linspace:" + std::to_string(count);
}

void ScanConfig::validate() const {
  if (!(alpha_max > 0.0 && alpha_max <= 1.0)) {
    throw ValidationError("alpha_max = " + std::to_string(alpha_max) + " is outside (0, 1]");
  }
  if (restarts == 0) throw ValidationError("restarts must be positive");
  if (max_iterations == 0) throw ValidationError("max_iterations must be positive");
  if (alpha_grid.kind == AlphaGridSpec::Kind::kLinspace && alpha_grid.count == 0) {
    throw ValidationError("linspace grid needs at least one point");
  }
}

std::vector<double> resolve_alpha_grid(const ScanConfig& config, const PValueMatrix& pvalues) {
  config.validate();
  std::vector<double> grid;
  if (config.alpha_grid.kind == AlphaGridSpec::Kind::kLinspace) {
    const std::size_t n = config.alpha_grid.count;
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n + 1);
      if (t <= config.alpha_max) grid.push_back(t);
    }
  } else {
    std::set<double> distinct(pvalues.values().data().begin(), pvalues.values().data().end());
    for (const double p : distinct) {
      if (p <= config.alpha_max) grid.push_back(p);
    }
  }
  if (grid.empty()) {
    throw ValidationError("alpha grid '" + config.alpha_grid.to_string() +
                          "' has no thresholds at or below alpha_max = " +
                          std::to_string(config.alpha_max));
  }
  return grid;
}

double priority(std::span<const double> element_pvalues, double threshold) {
  if (element_pvalues.empty()) throw ValidationError("priority: empty p-value list");
  const auto hits = std::count_if(element_pvalues.begin(), element_pvalues.end(),
                                  [threshold](double p) { return p <= threshold; });
  return static_cast<double>(hits) / static_cast<double>(element_pvalues.size());
}

RowSubset optimize_rows(const Matrix& pvalues, std::span<const double> alpha_grid) {
  const std::size_t rows = pvalues.rows();
  const std::size_t cols = pvalues.cols();
  if (rows == 0 || cols == 0) throw ValidationError("optimize_rows: empty p-value submatrix");
  if (alpha_grid.empty()) throw ValidationError("optimize_rows: empty alpha grid");
  const std::size_t thresholds = alpha_grid.size();

  // hits[t * rows + e] = #{p in row e : p <= grid[t]}; one merge pass per row.
  std::vector<std::uint32_t> hits(thresholds * rows);
  std::vector<double> sorted(cols);
  for (std::size_t e = 0; e < rows; ++e) {
    const auto row = pvalues.row(e);
    std::copy(row.begin(), row.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    std::size_t k = 0;
    for (std::size_t t = 0; t < thresholds; ++t) {
      while (k < cols && sorted[k] <= alpha_grid[t]) ++k;
      hits[t * rows + e] = static_cast<std::uint32_t>(k);
    }
  }

  RowSubset best;
  bool have = false;
  std::size_t best_t = 0, best_k = 0;
  std::vector<std::size_t> order(rows);
  std::vector<std::size_t> bucket_start(cols + 2);

  for (std::size_t t = 0; t < thresholds; ++t) {
    const std::uint32_t* h = hits.data() + t * rows;
    // Stable counting sort, descending by hit count (= priority * cols).
    std::fill(bucket_start.begin(), bucket_start.end(), 0);
    for (std::size_t e = 0; e < rows; ++e) ++bucket_start[cols - h[e] + 1];
    for (std::size_t b = 1; b < bucket_start.size(); ++b) bucket_start[b] += bucket_start[b - 1];
    for (std::size_t e = 0; e < rows; ++e) order[bucket_start[cols - h[e]]++] = e;

    std::size_t n_alpha = 0;
    for (std::size_t k = 1; k <= rows; ++k) {
      n_alpha += h[order[k - 1]];
      const BJScore s = berk_jones(k * cols, n_alpha, alpha_grid[t]);
      if (!have || s.score > best.score) {
        have = true;
        best.score = s.score;
        best.alpha = s.alpha;
        best.n = s.n;
        best.n_alpha = s.n_alpha;
        best_t = t;
        best_k = k;
      }
    }
  }

  // Rebuild the winning prefix.
  {
    const std::uint32_t* h = hits.data() + best_t * rows;
    std::vector<std::size_t> ranked(rows);
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [h](std::size_t a, std::size_t b) { return h[a] > h[b]; });
    best.rows.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(best_k));
    std::sort(best.rows.begin(), best.rows.end());
  }
  return best;
}

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

// Fills score/alpha/n/n_alpha from the p-values on samples x nodes.
void rescore(const PValueMatrix& pvalues, std::span<const double> grid, ScanResult& r) {
  std::vector<double> cells;
  cells.reserve(r.sample_indices.size() * r.node_indices.size());
  for (auto i : r.sample_indices)
    for (auto j : r.node_indices) cells.push_back(pvalues(i, j));
  const BJScore s = npss_score(cells, grid);
  r.score = s.score;
  r.alpha = s.alpha;
  r.n = s.n;
  r.n_alpha = s.n_alpha;
}

}  // namespace

Ascent ascend(const PValueMatrix& pvalues, std::span<const double> alpha_grid,
              std::vector<std::size_t> initial_nodes, std::size_t max_iterations) {
  if (initial_nodes.empty()) throw ValidationError("ascend: initial node subset is empty");
  if (max_iterations == 0) throw ValidationError("ascend: max_iterations must be positive");
  const auto samples_all = all_indices(pvalues.rows());
  const auto nodes_all = all_indices(pvalues.cols());

  Ascent out;
  std::vector<std::size_t> nodes = std::move(initial_nodes);
  std::vector<std::size_t> samples;
  double previous = -1.0;
  std::size_t iteration = 0;
  while (iteration < max_iterations) {
    ++iteration;
    const RowSubset by_sample = optimize_rows(pvalues.values().select(samples_all, nodes), alpha_grid);
    samples = by_sample.rows;
    out.step_scores.push_back(by_sample.score);

    const RowSubset by_node =
        optimize_rows(pvalues.values().select(samples, nodes_all).transposed(), alpha_grid);
    nodes = by_node.rows;
    out.step_scores.push_back(by_node.score);

    if (!(by_node.score > previous)) break;
    previous = by_node.score;
  }

  out.result.sample_indices = std::move(samples);
  out.result.node_indices = std::move(nodes);
  out.result.iterations_used = iteration;
  rescore(pvalues, alpha_grid, out.result);
  return out;
}

ScanResult scan(const PValueMatrix& pvalues, const ScanConfig& config) {
  const auto grid = resolve_alpha_grid(config, pvalues);
  return scan(pvalues, config, grid);
}

ScanResult scan(const PValueMatrix& pvalues, const ScanConfig& config,
                std::span<const double> alpha_grid) {
  config.validate();
  const std::size_t nodes = pvalues.cols();
  std::vector<ScanResult> per_restart(config.restarts);

  parallel_for(config.restarts, [&](std::size_t r) {
    Rng rng(derive_seed(config.seed, kRestartStream, r));
    std::vector<std::size_t> init;
    while (init.empty()) {
      for (std::size_t j = 0; j < nodes; ++j)
        if (rng.coin()) init.push_back(j);
    }
    per_restart[r] = ascend(pvalues, alpha_grid, std::move(init), config.max_iterations).result;
    per_restart[r].restart_index = r;
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < per_restart.size(); ++r) {
    if (per_restart[r].score > per_restart[best].score) best = r;
  }
  return per_restart[best];
}

std::vector<ScanResult> scan_individual(const PValueMatrix& pvalues, const ScanConfig& config) {
  const auto grid = resolve_alpha_grid(config, pvalues);
  std::vector<ScanResult> out(pvalues.rows());
  parallel_for(pvalues.rows(), [&](std::size_t i) {
    const std::size_t rows[] = {i};
    const RowSubset best = optimize_rows(pvalues.values().select_rows(rows).transposed(), grid);
    ScanResult& r = out[i];
    r.sample_indices = {i};
    r.node_indices = best.rows;
    r.iterations_used = 1;
    r.restart_index = 0;
    rescore(pvalues, grid, r);
  });
  return out;
}

ScanResult brute_force_scan(const PValueMatrix& pvalues, std::span<const double> alpha_grid) {
  const std::size_t m = pvalues.rows();
  const std::size_t j = pvalues.cols();
  if (m == 0 || j == 0) throw ValidationError("brute_force_scan: empty matrix");
  if (m > kBruteForceLimit || j > kBruteForceLimit) {
    throw RefusalError("brute_force_scan refuses " + std::to_string(m) + "x" + std::to_string(j) +
                       " input (limit " + std::to_string(kBruteForceLimit) + " per axis)");
  }

  auto members = [](std::uint32_t mask, std::size_t width) {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < width; ++b)
      if (mask >> b & 1u) out.push_back(b);
    return out;
  };

  ScanResult best;
  bool have = false;
  std::vector<double> cells;
  for (std::uint32_t smask = 1; smask < (1u << m); ++smask) {
    const auto samples = members(smask, m);
    for (std::uint32_t nmask = 1; nmask < (1u << j); ++nmask) {
      const auto nodes = members(nmask, j);
      cells.clear();
      for (auto a : samples)
        for (auto b : nodes) cells.push_back(pvalues(a, b));
      const BJScore s = npss_score(cells, alpha_grid);
      bool take = !have || s.score > best.score;
      if (have && s.score == best.score) {
        take = samples < best.sample_indices ||
               (samples == best.sample_indices && nodes < best.node_indices);
      }
      if (take) {
        have = true;
        best.score = s.score;
        best.alpha = s.alpha;
        best.n = s.n;
        best.n_alpha = s.n_alpha;
        best.sample_indices = samples;
        best.node_indices = nodes;
      }
    }
  }
  best.iterations_used = 0;
  best.restart_index = 0;
  return best;
}

}  // namespace subscan
