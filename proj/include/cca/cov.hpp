#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cca/graph.hpp"

namespace cca {

/// Dense symmetric matrix. Construction rejects non-square, non-finite or
/// asymmetric input and then mirrors the lower triangle so symmetry is exact.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Eigen::MatrixXd values, double rel_tol = 1e-10);

  static SymMatrix identity(int p);
  static SymMatrix diagonal(const Eigen::VectorXd& d);

  int dim() const { return static_cast<int>(values_.rows()); }
  double operator()(int i, int j) const { return values_(i, j); }
  const Eigen::MatrixXd& matrix() const { return values_; }

  /// Entry (sigma(u), sigma(v)) of the result is entry (u, v) of this matrix.
  SymMatrix permuted(const VertexOrdering& sigma) const;
  SymMatrix submatrix(const std::vector<int>& index) const;

 private:
  Eigen::MatrixXd values_;
};

struct DataMatrix {
  Eigen::MatrixXd values;  // n x p, rows are observations
  std::vector<std::string> variable_names;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }
};

/// Divisor n. With `center`, requires n >= 2.
SymMatrix sample_covariance(const DataMatrix& d, bool center = true);

/// D^{-1/2} S D^{-1/2}. Throws NumericalError on a non-positive diagonal.
SymMatrix to_correlation(const SymMatrix& s);

/// Eigendecomposition-based Moore-Penrose inverse; eigenvalues below
/// rel_cutoff * max|lambda| are treated as zero.
Eigen::MatrixXd pseudo_inverse(const SymMatrix& s, double rel_cutoff = 1e-10);

struct AbsoluteThreshold {
  double tau;
};
struct SparsityTarget {
  double fraction;
};
using ThresholdRule = std::variant<AbsoluteThreshold, SparsityTarget>;

/// Edge (i,j) iff |pinv(s)_ij| > tau. A sparsity target picks the smallest
/// tau whose off-diagonal zero fraction reaches the target.
Graph threshold_graph(const SymMatrix& s, const ThresholdRule& rule);

double min_eigenvalue(const SymMatrix& s);

}  // namespace cca
