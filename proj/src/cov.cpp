#include "cca/cov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cca/error.hpp"

namespace cca {

SymMatrix::SymMatrix(Eigen::MatrixXd values, double rel_tol)
    : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw InputError("matrix is " + std::to_string(values_.rows()) + "x" +
                     std::to_string(values_.cols()) + ", expected square");
  }
  if (!values_.allFinite()) throw InputError("matrix has non-finite entries");
  const double scale = values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  const Eigen::Index p = values_.rows();
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j + 1; i < p; ++i) {
      if (std::abs(values_(i, j) - values_(j, i)) > rel_tol * scale) {
        throw InputError("matrix is not symmetric at (" +
                         std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ")");
      }
      values_(j, i) = values_(i, j);
    }
  }
}

SymMatrix SymMatrix::identity(int p) {
  return SymMatrix(Eigen::MatrixXd::Identity(p, p));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

SymMatrix SymMatrix::permuted(const VertexOrdering& sigma) const {
  const int p = dim();
  Eigen::MatrixXd out(p, p);
  for (int v = 0; v < p; ++v) {
    for (int u = 0; u < p; ++u) {
      out(sigma.position(u), sigma.position(v)) = values_(u, v);
    }
  }
  return SymMatrix(std::move(out));
}

SymMatrix SymMatrix::submatrix(const std::vector<int>& index) const {
  const auto m = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index b = 0; b < m; ++b) {
    for (Eigen::Index a = 0; a < m; ++a) out(a, b) = values_(index[a], index[b]);
  }
  return SymMatrix(std::move(out));
}

SymMatrix sample_covariance(const DataMatrix& d, bool center) {
  if (d.n() < 1 || d.p() < 1) throw InputError("data matrix is empty");
  if (center && d.n() < 2) {
    throw InputError("centered covariance needs at least 2 observations");
  }
  if (!d.values.allFinite()) throw InputError("data has non-finite entries");
  Eigen::MatrixXd y = d.values;
  if (center) y.rowwise() -= y.colwise().mean();
  Eigen::MatrixXd s(d.p(), d.p());
  s.setZero();
  s.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose(),
                                               1.0 / d.n());
  s = s.selfadjointView<Eigen::Lower>();
  return SymMatrix(std::move(s));
}

SymMatrix to_correlation(const SymMatrix& s) {
  const int p = s.dim();
  Eigen::VectorXd inv_sd(p);
  for (int i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0)) {
      throw NumericalError("non-positive variance at index " +
                           std::to_string(i + 1));
    }
    inv_sd(i) = 1.0 / std::sqrt(s(i, i));
  }
  Eigen::MatrixXd r = inv_sd.asDiagonal() * s.matrix() * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  return SymMatrix(std::move(r));
}

Eigen::MatrixXd pseudo_inverse(const SymMatrix& s, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.matrix());
  if (eig.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double cutoff =
      rel_cutoff * (lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (std::abs(lambda(k)) > cutoff) inv(k) = 1.0 / lambda(k);
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  return v * inv.asDiagonal() * v.transpose();
}

Graph threshold_graph(const SymMatrix& s, const ThresholdRule& rule) {
  const int p = s.dim();
  Eigen::MatrixXd inv = pseudo_inverse(s);

  double tau = 0.0;
  if (const auto* abs_rule = std::get_if<AbsoluteThreshold>(&rule)) {
    if (!(abs_rule->tau >= 0.0)) throw InputError("threshold must be >= 0");
    tau = abs_rule->tau;
  } else {
    const double f = std::get<SparsityTarget>(rule).fraction;
    if (!(f > 0.0 && f < 1.0)) {
      throw InputError("target sparsity must lie in (0,1)");
    }
    std::vector<double> mags;
    mags.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    for (int j = 0; j < p; ++j) {
      for (int i = j + 1; i < p; ++i) {
        mags.push_back(std::abs(0.5 * (inv(i, j) + inv(j, i))));
      }
    }
    if (mags.empty()) return Graph(p);
    // smallest order statistic with at least ceil(f * M) entries at or below
    auto k = static_cast<std::size_t>(
        std::ceil(f * static_cast<double>(mags.size())));
    k = std::clamp<std::size_t>(k, 1, mags.size());
    std::nth_element(mags.begin(), mags.begin() + (k - 1), mags.end());
    tau = mags[k - 1];
  }

  Graph g(p);
  for (int j = 0; j < p; ++j) {
    for (int i = j + 1; i < p; ++i) {
      if (std::abs(0.5 * (inv(i, j) + inv(j, i))) > tau) g.add_edge(i, j);
    }
  }
  return g;
}

double min_eigenvalue(const SymMatrix& s) {
  if (s.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.matrix(),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace cca
