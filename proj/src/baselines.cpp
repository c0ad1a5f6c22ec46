#include "cca/baselines.hpp"

#include <cmath>
#include <string>

#include "cca/error.hpp"

namespace cca {

namespace {

void validate(const SymMatrix& s, const Graph& g, const IterativeConfig& cfg) {
  if (s.dim() != g.size()) {
    throw InputError("covariance and graph dimensions differ");
  }
  if (!(cfg.tol > 0.0)) throw InputError("tol must be positive");
  if (cfg.max_iter < 1) throw InputError("max_iter must be at least 1");
  for (int i = 0; i < s.dim(); ++i) {
    if (!(s(i, i) > 0.0)) {
      throw InputError("covariance diagonal is not positive at index " +
                       std::to_string(i + 1));
    }
  }
}

Eigen::MatrixXd initial_omega(const SymMatrix& s, const Graph& g,
                              const IterativeInit& init) {
  const int p = s.dim();
  if (std::holds_alternative<IdentityScaledInit>(init)) {
    return Eigen::MatrixXd::Identity(p, p) * (p / s.matrix().trace());
  }
  if (std::holds_alternative<DiagonalInit>(init)) {
    return s.matrix().diagonal().cwiseInverse().asDiagonal();
  }
  const SymMatrix& w = std::get<WarmStart>(init).omega;
  if (w.dim() != p) throw InputError("warm start has the wrong dimension");
  Eigen::MatrixXd omega = w.matrix();
  // Off-pattern residue would never be touched by either update.
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      if (i != j && !g.has_edge(i, j)) omega(i, j) = 0.0;
    }
  }
  return omega;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + " is not positive definite");
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(idx.size(), idx.size());
  for (std::size_t b = 0; b < idx.size(); ++b) {
    for (std::size_t a = 0; a < idx.size(); ++a) out(a, b) = m(idx[a], idx[b]);
  }
  return out;
}

double objective(const Eigen::MatrixXd& omega, const SymMatrix& s) {
  return neg_loglik(SymMatrix(omega, 1e-6), s);
}

}  // namespace

double neg_loglik(const SymMatrix& omega, const SymMatrix& s) {
  if (omega.dim() != s.dim()) throw InputError("dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(omega.matrix());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("precision iterate is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  const double trace = omega.matrix().cwiseProduct(s.matrix()).sum();
  return trace - logdet;
}

IterativeResult ipf_mle(const SymMatrix& s, const Graph& g,
                        const IterativeConfig& cfg) {
  validate(s, g, cfg);
  const int p = s.dim();
  const auto cliques = maximal_cliques(g, cfg.clique_cap);

  // Marginal precisions of S are fixed across sweeps.
  std::vector<Eigen::MatrixXd> target;
  target.reserve(cliques.size());
  for (const auto& c : cliques) {
    target.push_back(spd_inverse(gather(s.matrix(), c),
                                 ("covariance block on clique containing " +
                                  std::to_string(c.front() + 1))
                                     .c_str()));
  }

  Eigen::MatrixXd omega = initial_omega(s, g, cfg.init);
  IterativeResult res;
  res.history.push_back(objective(omega, s));
  double delta = 0.0;
  for (int sweep = 1; sweep <= cfg.max_iter; ++sweep) {
    Eigen::MatrixXd sigma = spd_inverse(omega, "precision iterate");
    delta = 0.0;
    for (std::size_t t = 0; t < cliques.size(); ++t) {
      const auto& c = cliques[t];
      const Eigen::Index m = static_cast<Eigen::Index>(c.size());
      const Eigen::MatrixXd sigma_cc = gather(sigma, c);
      const Eigen::MatrixXd sigma_cc_inv = spd_inverse(sigma_cc, "clique marginal");
      const Eigen::MatrixXd step = target[t] - sigma_cc_inv;
      for (Eigen::Index b = 0; b < m; ++b) {
        for (Eigen::Index a = 0; a < m; ++a) {
          omega(c[a], c[b]) += step(a, b);
          delta = std::max(delta, std::abs(step(a, b)));
        }
      }
      // Rank-|C| update so that the new Sigma_CC equals S_CC.
      Eigen::MatrixXd cols(p, m);
      for (Eigen::Index a = 0; a < m; ++a) cols.col(a) = sigma.col(c[a]);
      const Eigen::MatrixXd mid = sigma_cc_inv *
                                  (gather(s.matrix(), c) - sigma_cc) *
                                  sigma_cc_inv;
      sigma.noalias() += cols * mid * cols.transpose();
    }
    res.history.push_back(objective(omega, s));
    res.iterations = sweep;
    if (delta < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.final_delta = delta;
  res.omega = SymMatrix(std::move(omega), 1e-6);
  res.neg_loglik = res.history.back();
  return res;
}

IterativeResult gipf_mle(const SymMatrix& s, const Graph& g,
                         const IterativeConfig& cfg) {
  validate(s, g, cfg);
  const int p = s.dim();
  const Eigen::MatrixXd& sm = s.matrix();

  Eigen::MatrixXd omega = initial_omega(s, g, cfg.init);
  IterativeResult res;
  res.history.push_back(objective(omega, s));
  double delta = 0.0;
  for (int sweep = 1; sweep <= cfg.max_iter; ++sweep) {
    Eigen::MatrixXd sigma = spd_inverse(omega, "precision iterate");
    delta = 0.0;
    for (int j = 0; j < p; ++j) {
      const double s22 = sm(j, j);
      // A = inverse of Omega with row/column j removed, embedded in p x p
      // (row/column j of A is unused).
      const double sig22 = sigma(j, j);
      const Eigen::VectorXd sig12 = sigma.col(j);
      Eigen::MatrixXd a = sigma;
      a.noalias() -= sig12 * sig12.transpose() / sig22;

      const auto nbr = g.neighbors(j);
      const Eigen::Index k = static_cast<Eigen::Index>(nbr.size());
      Eigen::VectorXd w(k);
      double quad = 0.0;
      if (k > 0) {
        Eigen::MatrixXd a_nn(k, k);
        Eigen::VectorXd s_n(k);
        for (Eigen::Index y = 0; y < k; ++y) {
          s_n(y) = sm(nbr[y], j);
          for (Eigen::Index x = 0; x < k; ++x) a_nn(x, y) = a(nbr[x], nbr[y]);
        }
        Eigen::LLT<Eigen::MatrixXd> llt(a_nn);
        if (llt.info() != Eigen::Success) {
          throw NumericalError("row " + std::to_string(j + 1) +
                               ": conditional block lost definiteness");
        }
        w = -llt.solve(s_n) / s22;
        quad = w.dot(a_nn * w);
      }
      const double w22 = 1.0 / s22 + quad;

      delta = std::max(delta, std::abs(w22 - omega(j, j)));
      omega(j, j) = w22;
      for (Eigen::Index y = 0; y < k; ++y) {
        delta = std::max(delta, std::abs(w(y) - omega(nbr[y], j)));
        omega(nbr[y], j) = omega(j, nbr[y]) = w(y);
      }

      // Sigma for the new row: gamma = w22 - w'Aw = 1/s22.
      Eigen::VectorXd aw = Eigen::VectorXd::Zero(p);
      for (Eigen::Index y = 0; y < k; ++y) aw += a.col(nbr[y]) * w(y);
      aw(j) = 0.0;
      a.row(j).setZero();
      a.col(j).setZero();
      sigma = a;
      sigma.noalias() += s22 * aw * aw.transpose();
      sigma.col(j) = -s22 * aw;
      sigma.row(j) = sigma.col(j).transpose();
      sigma(j, j) = s22;
    }
    res.history.push_back(objective(omega, s));
    res.iterations = sweep;
    if (delta < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.final_delta = delta;
  res.omega = SymMatrix(std::move(omega), 1e-6);
  res.neg_loglik = res.history.back();
  return res;
}

}  // namespace cca
