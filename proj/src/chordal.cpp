#include "cca/chordal.hpp"

#include <cmath>
#include <string>

#include "cca/error.hpp"
#include "parallel.hpp"

namespace cca {

namespace {

// Conditional variances at or below this fraction of S_jj are treated as a
// breakdown: the neighbour block is numerically singular.
constexpr double kSchurFloor = 1e-13;

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t b = 0; b < cols.size(); ++b) {
    for (std::size_t a = 0; a < rows.size(); ++a) out(a, b) = m(rows[a], cols[b]);
  }
  return out;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, const std::string& what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(what + " is not positive definite");
  }
  return llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

std::string column_failure(int j, const char* why) {
  return "Step I failed at column " + std::to_string(j + 1) + ": " + why +
         " (sample size may be too small for the largest clique of the "
         "filled graph)";
}

}  // namespace

CholFactor::CholFactor(Eigen::MatrixXd values,
                       std::vector<std::vector<int>> below)
    : values_(std::move(values)), below_(std::move(below)) {}

SymMatrix CholFactor::product() const {
  Eigen::MatrixXd tri = values_.triangularView<Eigen::Lower>();
  Eigen::MatrixXd out(tri.rows(), tri.rows());
  out.setZero();
  out.selfadjointView<Eigen::Lower>().rankUpdate(tri);
  out = out.selfadjointView<Eigen::Lower>();
  return SymMatrix(std::move(out));
}

CholFactor chordal_cholesky_mle(const SymMatrix& s, const FilledGraph& fg,
                                int threads) {
  const int p = fg.size();
  if (s.dim() != p) throw InputError("covariance dimension does not match graph");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
  const Eigen::MatrixXd& sm = s.matrix();

  detail::parallel_for(p, threads, [&](int j) {
    const auto& nbr = fg.below[j];
    double schur = sm(j, j);
    Eigen::VectorXd coef;
    if (!nbr.empty()) {
      Eigen::MatrixXd block = gather(sm, nbr, nbr);
      Eigen::VectorXd q(nbr.size());
      for (std::size_t a = 0; a < nbr.size(); ++a) q(a) = sm(nbr[a], j);
      Eigen::LLT<Eigen::MatrixXd> llt(block);
      if (llt.info() != Eigen::Success) {
        throw ColumnFailure(
            j, column_failure(j, "neighbour covariance block is singular"));
      }
      coef = llt.solve(q);
      schur -= q.dot(coef);
    }
    if (!(schur > kSchurFloor * sm(j, j)) || !std::isfinite(schur)) {
      throw ColumnFailure(
          j, column_failure(j, "conditional variance is not positive"));
    }
    const double diag = 1.0 / std::sqrt(schur);
    l(j, j) = diag;
    for (std::size_t a = 0; a < nbr.size(); ++a) l(nbr[a], j) = -coef(a) * diag;
  });
  return CholFactor(std::move(l), fg.below);
}

SymMatrix chordal_completion(const SymMatrix& s, const FilledGraph& fg) {
  const int p = fg.size();
  if (s.dim() != p) throw InputError("covariance dimension does not match graph");
  Eigen::MatrixXd w = s.matrix();
  std::vector<char> is_nbr(static_cast<std::size_t>(p), 0);

  // Vertex j is conditionally independent of its later non-neighbours given
  // its later neighbours; fill in from the last vertex backwards.
  for (int j = p - 2; j >= 0; --j) {
    const auto& nbr = fg.below[j];
    const int later = p - 1 - j;
    if (static_cast<int>(nbr.size()) == later) continue;
    for (int i : nbr) is_nbr[i] = 1;
    if (nbr.empty()) {
      for (int k = j + 1; k < p; ++k) w(k, j) = w(j, k) = 0.0;
    } else {
      Eigen::MatrixXd block = gather(w, nbr, nbr);
      Eigen::VectorXd q(nbr.size());
      for (std::size_t a = 0; a < nbr.size(); ++a) q(a) = w(nbr[a], j);
      Eigen::LLT<Eigen::MatrixXd> llt(block);
      if (llt.info() != Eigen::Success) {
        throw ColumnFailure(
            j, column_failure(j, "neighbour covariance block is singular"));
      }
      Eigen::VectorXd beta = llt.solve(q);
      for (int k = j + 1; k < p; ++k) {
        if (is_nbr[k]) continue;
        double v = 0.0;
        for (std::size_t a = 0; a < nbr.size(); ++a) v += w(k, nbr[a]) * beta(a);
        w(k, j) = w(j, k) = v;
      }
    }
    for (int i : nbr) is_nbr[i] = 0;
  }
  return SymMatrix(std::move(w));
}

CholFactor dense_step1(const SymMatrix& s, const FilledGraph& fg) {
  const int p = fg.size();
  SymMatrix completed = chordal_completion(s, fg);
  Eigen::LLT<Eigen::MatrixXd> cov_llt(completed.matrix());
  if (cov_llt.info() != Eigen::Success) {
    throw NumericalError(
        "Step I failed: completed covariance is not positive definite "
        "(sample size may be too small for the largest clique of the filled "
        "graph)");
  }
  Eigen::MatrixXd omega =
      cov_llt.solve(Eigen::MatrixXd::Identity(p, p));
  omega = 0.5 * (omega + omega.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Step I failed: precision estimate lost definiteness");
  }
  Eigen::MatrixXd l = llt.matrixL();
  // The factor of a matrix in P_{G^D} is structurally zero off the filled
  // pattern; clear rounding residue there.
  std::vector<char> keep(static_cast<std::size_t>(p), 0);
  for (int j = 0; j < p; ++j) {
    for (int i : fg.below[j]) keep[i] = 1;
    for (int i = j + 1; i < p; ++i) {
      if (!keep[i]) l(i, j) = 0.0;
    }
    for (int i : fg.below[j]) keep[i] = 0;
  }
  return CholFactor(std::move(l), fg.below);
}

CliqueSequence clique_sequence(const FilledGraph& fg) {
  const int p = fg.size();
  // C_j = {j} u below[j] is maximal unless some elimination child c has
  // |below[c]| = |below[j]| + 1, in which case C_j is contained in C_c.
  std::vector<char> maximal(static_cast<std::size_t>(p), 1);
  std::vector<int> absorber(static_cast<std::size_t>(p), -1);
  for (int c = 0; c < p; ++c) {
    if (fg.below[c].empty()) continue;
    int parent = fg.below[c].front();
    if (fg.below[c].size() == fg.below[parent].size() + 1 && maximal[parent]) {
      maximal[parent] = 0;
      absorber[parent] = c;
    }
  }
  // A non-maximal C_v lives inside the clique of its absorbing descendant,
  // which can sit at a lower position, so emit cliques parent-first along
  // the clique tree rather than by position.
  auto owner = [&](int v) {
    while (!maximal[v]) v = absorber[v];
    return v;
  };
  std::vector<std::vector<int>> children(static_cast<std::size_t>(p));
  std::vector<int> roots;
  for (int j = p - 1; j >= 0; --j) {
    if (!maximal[j]) continue;
    int x = j;
    int parent = -1;
    while (!fg.below[x].empty()) {
      const int u = fg.below[x].front();
      const int r = owner(u);
      if (r != j) {
        parent = r;
        break;
      }
      x = u;
    }
    if (parent < 0) {
      roots.push_back(j);
    } else {
      children[parent].push_back(j);
    }
  }
  std::vector<int> order;
  std::vector<int> stack(roots.rbegin(), roots.rend());
  while (!stack.empty()) {
    const int j = stack.back();
    stack.pop_back();
    order.push_back(j);
    stack.insert(stack.end(), children[j].rbegin(), children[j].rend());
  }

  CliqueSequence seq;
  std::vector<char> covered(static_cast<std::size_t>(p), 0);
  for (int j : order) {
    std::vector<int> clique{j};
    clique.insert(clique.end(), fg.below[j].begin(), fg.below[j].end());
    std::vector<int> sep;
    for (int v : clique) {
      if (covered[v]) sep.push_back(v);
    }
    for (int v : clique) covered[v] = 1;
    seq.cliques.push_back(std::move(clique));
    seq.separators.push_back(std::move(sep));
  }
  return seq;
}

SymMatrix clique_mle_oracle(const SymMatrix& s, const FilledGraph& fg) {
  const int p = fg.size();
  if (s.dim() != p) throw InputError("covariance dimension does not match graph");
  const Eigen::MatrixXd& sm = s.matrix();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  CliqueSequence seq = clique_sequence(fg);

  auto accumulate = [&](const std::vector<int>& idx, double sign) {
    if (idx.empty()) return;
    Eigen::MatrixXd inv = spd_inverse(
        gather(sm, idx, idx),
        "covariance block on vertex " + std::to_string(idx.front() + 1) + "..");
    for (std::size_t b = 0; b < idx.size(); ++b) {
      for (std::size_t a = 0; a < idx.size(); ++a) {
        omega(idx[a], idx[b]) += sign * inv(a, b);
      }
    }
  };
  for (std::size_t t = 0; t < seq.cliques.size(); ++t) {
    accumulate(seq.cliques[t], 1.0);
    accumulate(seq.separators[t], -1.0);
  }
  omega = 0.5 * (omega + omega.transpose()).eval();
  return SymMatrix(std::move(omega));
}

}  // namespace cca
