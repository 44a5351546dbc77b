#pragma once

#include <cstddef>
#include <span>

#include "subscan/matrix.hpp"

namespace subscan {

/// Berk-Jones score of a set of p-values at one significance threshold.
struct BJScore {
  double score = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t n_alpha = 0;

  friend bool operator==(const BJScore&, const BJScore&) = default;
};

/// p_ij = (1 + #{z : background(z, j) >= test(i, j)}) / (|Z| + 1).
/// Columns are processed independently (and in parallel).
PValueMatrix empirical_pvalues(const ActivationMatrix& background, const ActivationMatrix& test);

/// Bernoulli KL divergence KL(x || y) in nats with 0 log 0 = 0.
/// Requires x in [0, 1] and y in (0, 1); throws DomainError otherwise.
double kl_divergence(double x, double y);

/// n * KL(n_alpha / n, alpha) when n_alpha / n > alpha, else 0.
/// alpha == 1 is accepted and always scores 0 (no excess is possible).
BJScore berk_jones(std::size_t n, std::size_t n_alpha, double alpha);

/// max over the grid of berk_jones(N, #{p <= alpha}, alpha). Ties go to the
/// smaller alpha. `alpha_grid` must be non-empty and strictly increasing.
BJScore npss_score(std::span<const double> pvalues, std::span<const double> alpha_grid);

}  // namespace subscan
