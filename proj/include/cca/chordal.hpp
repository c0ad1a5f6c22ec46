#pragma once

// Closed-form Gaussian MLE on a decomposable cover, expressed through its
// Cholesky factor. All matrices here live in position coordinates: S must
// already be permuted by the ordering that produced the FilledGraph.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cca/cov.hpp"
#include "cca/error.hpp"
#include "cca/graph.hpp"

namespace cca {

/// Step I breakdown at a specific column (0-based position).
class ColumnFailure : public NumericalError {
 public:
  ColumnFailure(int column, const std::string& what)
      : NumericalError(what), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

/// Lower-triangular factor with positive diagonal. Entries below the diagonal
/// are non-zero only at positions listed in `pattern()` (per column).
class CholFactor {
 public:
  CholFactor() = default;
  CholFactor(Eigen::MatrixXd values, std::vector<std::vector<int>> below);

  int dim() const { return static_cast<int>(values_.rows()); }
  double operator()(int i, int j) const { return values_(i, j); }
  double& at(int i, int j) { return values_(i, j); }
  const Eigen::MatrixXd& matrix() const { return values_; }
  const std::vector<std::vector<int>>& pattern() const { return below_; }

  /// L * L^T
  SymMatrix product() const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::vector<int>> below_;
};

/// Column-by-column formula. `threads` > 1 evaluates columns concurrently;
/// the result does not depend on it. Throws NumericalError naming the column
/// (1-based position) when a neighbour block is singular or the conditional
/// variance is not positive.
CholFactor chordal_cholesky_mle(const SymMatrix& s, const FilledGraph& fg,
                                int threads = 1);

/// Maximum-determinant positive-definite completion of S off the filled
/// pattern (entries outside E^D are replaced).
SymMatrix chordal_completion(const SymMatrix& s, const FilledGraph& fg);

/// Dense route: complete S, invert, and factor the inverse.
CholFactor dense_step1(const SymMatrix& s, const FilledGraph& fg);

/// Cliques of the filled graph in a running-intersection order, with the
/// separator of each clique against the union of its predecessors.
struct CliqueSequence {
  std::vector<std::vector<int>> cliques;
  std::vector<std::vector<int>> separators;
};
CliqueSequence clique_sequence(const FilledGraph& fg);

/// sum_C [(S_C)^{-1}]^0 - sum_Sep [(S_Sep)^{-1}]^0 over the clique sequence.
SymMatrix clique_mle_oracle(const SymMatrix& s, const FilledGraph& fg);

}  // namespace cca
