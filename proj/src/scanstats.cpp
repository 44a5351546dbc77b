#include "subscan/scanstats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "subscan/errors.hpp"
#include "subscan/parallel.hpp"

namespace subscan {

PValueMatrix empirical_pvalues(const ActivationMatrix& background, const ActivationMatrix& test) {
  const std::size_t nodes = background.num_nodes();
  if (test.num_nodes() != nodes) {
    throw DimensionError("background has " + std::to_string(nodes) + " nodes but test has " +
                         std::to_string(test.num_nodes()));
  }
  const std::size_t z = background.num_samples();
  const std::size_t m = test.num_samples();
  std::vector<std::size_t> ranks(m * nodes);

  parallel_for(nodes, [&](std::size_t j) {
    std::vector<double> column(z);
    for (std::size_t r = 0; r < z; ++r) column[r] = background.values()(r, j);
    std::sort(column.begin(), column.end());
    for (std::size_t i = 0; i < m; ++i) {
      const double x = test.values()(i, j);
      // Background values >= x occupy [lower_bound(x), end).
      const auto first = std::lower_bound(column.begin(), column.end(), x);
      ranks[i * nodes + j] = 1 + static_cast<std::size_t>(column.end() - first);
    }
  });

  auto p = PValueMatrix::from_ranks(m, nodes, ranks, z);
  return PValueMatrix(p.values(), z, test.layer_id(), test.sample_ids());
}

double kl_divergence(double x, double y) {
  if (!(y > 0.0 && y < 1.0)) {
    throw DomainError("kl_divergence: y = " + std::to_string(y) + " is outside (0, 1)");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("kl_divergence: x = " + std::to_string(x) + " is outside [0, 1]");
  }
  double out = 0.0;
  if (x > 0.0) out += x * std::log(x / y);
  if (x < 1.0) out += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
  return std::max(out, 0.0);
}

BJScore berk_jones(std::size_t n, std::size_t n_alpha, double alpha) {
  if (n == 0) throw ValidationError("berk_jones: n must be positive");
  if (n_alpha > n) {
    throw ValidationError("berk_jones: n_alpha = " + std::to_string(n_alpha) + " exceeds n = " +
                          std::to_string(n));
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("berk_jones: alpha = " + std::to_string(alpha) + " is outside (0, 1]");
  }
  BJScore out{0.0, alpha, n, n_alpha};
  const double observed = static_cast<double>(n_alpha) / static_cast<double>(n);
  if (observed > alpha) out.score = static_cast<double>(n) * kl_divergence(observed, alpha);
  return out;
}

BJScore npss_score(std::span<const double> pvalues, std::span<const double> alpha_grid) {
  if (pvalues.empty()) throw ValidationError("npss_score: empty p-value set");
  if (alpha_grid.empty()) throw ValidationError("npss_score: empty alpha grid");
  if (std::adjacent_find(alpha_grid.begin(), alpha_grid.end(),
                         [](double a, double b) { return b <= a; }) != alpha_grid.end()) {
    throw ValidationError("npss_score: alpha grid must be strictly increasing");
  }

  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());

  BJScore best;
  bool have = false;
  for (const double alpha : alpha_grid) {
    const auto n_alpha = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), alpha) - sorted.begin());
    const BJScore s = berk_jones(sorted.size(), n_alpha, alpha);
    if (!have || s.score > best.score) {
      best = s;
      have = true;
    }
  }
  return best;
}

}  // namespace subscan
