#pragma once

// Minimum-variance portfolio on rolling windows.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cca/cov.hpp"
#include "cca/estimate.hpp"
#include "cca/graph.hpp"

namespace cca {

/// w = Omega 1 / (1' Omega 1). Throws NumericalError when 1' Omega 1 <= 0.
Eigen::VectorXd min_variance_weights(const SymMatrix& omega);

struct PortfolioOptions {
  /// Estimation window length.
  int window = 0;
  /// Rebalance every `hold` periods; 0 means hold = window.
  int hold = 0;
  /// Fixed pattern, or a per-window threshold selection.
  std::optional<Graph> graph;
  double target_sparsity = 0.95;
  EstimateOptions estimate;
};

struct PortfolioPeriod {
  /// Index of the first return row after the window (0-based).
  int start = 0;
  int length = 0;
  Eigen::VectorXd weights;
  std::size_t edges = 0;
  /// w' S w on the estimation window.
  double in_sample_variance = 0.0;
  /// Sample variance of realized portfolio returns over the hold period
  /// (divisor = length); zero when length is 1.
  double realized_variance = 0.0;
  double mean_return = 0.0;
};

/// Rows of `returns` are periods. Throws InputError on a bad window and
/// NumericalError (naming the window) when an estimate fails.
std::vector<PortfolioPeriod> rolling_min_variance(const DataMatrix& returns,
                                                  const PortfolioOptions& opts);

}  // namespace cca
