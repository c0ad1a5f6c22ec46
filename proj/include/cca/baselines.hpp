#pragma once

// Iterative Gaussian MLE under a zero pattern: clique-marginal IPF and
// row-wise G-IPF. Both minimize tr(Omega S) - log det(Omega) over P_G.

#include <cstddef>
#include <variant>
#include <vector>

#include "cca/cov.hpp"
#include "cca/graph.hpp"

namespace cca {

/// Omega_0 = (p / tr S) I.
struct IdentityScaledInit {};
/// Omega_0 = diag(1 / S_ii).
struct DiagonalInit {};
/// Must be positive definite and zero off the pattern.
struct WarmStart {
  SymMatrix omega;
};
using IterativeInit = std::variant<IdentityScaledInit, DiagonalInit, WarmStart>;

struct IterativeConfig {
  /// Stop once a full sweep changes no entry by more than tol.
  double tol = 1e-8;
  int max_iter = 5000;
  IterativeInit init = DiagonalInit{};
  /// IPF only.
  std::size_t clique_cap = 100'000;
};

struct IterativeResult {
  SymMatrix omega;
  int iterations = 0;
  bool converged = false;
  double final_delta = 0.0;
  double neg_loglik = 0.0;
  /// history[0] at the start point, history[k] after sweep k.
  std::vector<double> history;
};

/// tr(Omega S) - log det(Omega). Throws NumericalError unless Omega is
/// positive definite.
double neg_loglik(const SymMatrix& omega, const SymMatrix& s);

/// Throws ResourceError when the graph has more than cfg.clique_cap maximal
/// cliques and NumericalError when a clique block of S is singular.
IterativeResult ipf_mle(const SymMatrix& s, const Graph& g,
                        const IterativeConfig& cfg = {});

/// Each row update holds the complementary block of Omega fixed and solves
/// for the row's free entries (its neighbours) and its diagonal exactly.
IterativeResult gipf_mle(const SymMatrix& s, const Graph& g,
                         const IterativeConfig& cfg = {});

}  // namespace cca
