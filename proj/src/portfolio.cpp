#include "cca/portfolio.hpp"

#include <string>

#include "cca/error.hpp"

namespace cca {

Eigen::VectorXd min_variance_weights(const SymMatrix& omega) {
  const Eigen::VectorXd row_sums = omega.matrix().rowwise().sum();
  const double total = row_sums.sum();
  if (!(total > 0.0)) {
    throw NumericalError("1' Omega 1 is not positive; weights undefined");
  }
  return row_sums / total;
}

std::vector<PortfolioPeriod> rolling_min_variance(const DataMatrix& returns,
                                                  const PortfolioOptions& opts) {
  const int t_total = returns.n();
  const int p = returns.p();
  if (opts.window < 2) throw InputError("window length must be at least 2");
  if (opts.window >= t_total) {
    throw InputError("window length " + std::to_string(opts.window) +
                     " leaves no out-of-sample periods in " +
                     std::to_string(t_total) + " rows");
  }
  if (opts.hold < 0) throw InputError("hold length must be non-negative");
  if (opts.graph && opts.graph->size() != p) {
    throw InputError("graph has " + std::to_string(opts.graph->size()) +
                     " vertices but returns have " + std::to_string(p) +
                     " columns");
  }
  if (!opts.graph &&
      !(opts.target_sparsity > 0.0 && opts.target_sparsity < 1.0)) {
    throw InputError("target sparsity must lie in (0, 1)");
  }
  const int hold = opts.hold > 0 ? opts.hold : opts.window;

  std::vector<PortfolioPeriod> out;
  for (int start = opts.window; start < t_total; start += hold) {
    DataMatrix win{returns.values.middleRows(start - opts.window, opts.window),
                   {}};
    SymMatrix s = sample_covariance(win);
    Graph g = opts.graph ? *opts.graph
                         : threshold_graph(s, SparsityTarget{opts.target_sparsity});
    EstimateReport rep;
    try {
      rep = cca_estimate(s, g, opts.estimate);
    } catch (const NumericalError& e) {
      throw NumericalError("window ending at row " + std::to_string(start) +
                           ": " + e.what());
    }
    PortfolioPeriod period;
    period.start = start;
    period.length = std::min(hold, t_total - start);
    period.weights = min_variance_weights(rep.omega_hat);
    period.edges = g.edge_count();
    period.in_sample_variance =
        period.weights.dot(s.matrix() * period.weights);
    const Eigen::VectorXd realized =
        returns.values.middleRows(start, period.length) * period.weights;
    period.mean_return = realized.mean();
    period.realized_variance =
        (realized.array() - period.mean_return).square().mean();
    out.push_back(std::move(period));
  }
  return out;
}

}  // namespace cca
