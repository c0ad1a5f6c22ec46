#include <doctest.h>

#include <cmath>

#include "cca/baselines.hpp"
#include "cca/chordal.hpp"
#include "cca/error.hpp"
#include "cca/estimate.hpp"
#include "cca/simgen.hpp"
#include "support/oracles.hpp"

using namespace cca;

namespace {

IterativeConfig tight(double tol = 1e-10) {
  IterativeConfig cfg;
  cfg.tol = tol;
  return cfg;
}

bool non_increasing(const std::vector<double>& h) {
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (h[k] > h[k - 1] + 1e-12 * std::max(1.0, std::abs(h[k - 1]))) return false;
  }
  return true;
}

// Decomposable MLE in original labels via the clique oracle.
Eigen::MatrixXd chordal_mle(const SymMatrix& s, const oracle::ChordalInstance& inst) {
  const FilledGraph fg = filled_graph(apply_ordering(inst.graph, inst.peo));
  const SymMatrix pos = clique_mle_oracle(s.permuted(inst.peo), fg);
  return pos.permuted(inst.peo.inverse()).matrix();
}

}  // namespace

TEST_CASE("neg_loglik") {
  const SymMatrix s = SymMatrix::identity(3);
  CHECK(neg_loglik(SymMatrix::identity(3), s) == doctest::Approx(3.0));
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(1, 1) = -1;
  CHECK_THROWS_AS(neg_loglik(SymMatrix(bad), s), NumericalError);
}

TEST_CASE("complete graph: IPF reaches S^-1 in one sweep") {
  const int p = 6;
  const SymMatrix s(oracle::random_spd(p, 5));
  const IterativeResult r = ipf_mle(s, Graph::complete(p), tight());
  CHECK(oracle::max_abs_diff(r.omega.matrix(), s.matrix().inverse()) < 1e-10);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK(r.history.size() == static_cast<std::size_t>(r.iterations) + 1);
}

TEST_CASE("edgeless graph: G-IPF gives diag(1/S_ii)") {
  const SymMatrix s(oracle::random_spd(5, 6));
  const IterativeResult r = gipf_mle(s, Graph(5), tight());
  for (int i = 0; i < 5; ++i) {
    CHECK(r.omega(i, i) == doctest::Approx(1 / s(i, i)));
    for (int j = 0; j < i; ++j) CHECK(r.omega(i, j) == 0.0);
  }
}

TEST_CASE("4-cycle: both baselines recover the feasible truth") {
  const Eigen::MatrixXd omega = oracle::four_cycle_omega();
  const SymMatrix s(omega.inverse());
  const Graph c4 = gen_named_graph(CycleGraph{4});
  for (const auto& r : {ipf_mle(s, c4, tight()), gipf_mle(s, c4, tight())}) {
    CHECK(r.converged);
    CHECK(oracle::max_abs_diff(r.omega.matrix(), omega) < 1e-6);
  }
}

TEST_CASE("decomposable graphs: both baselines match the clique oracle") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const int p = 5 + static_cast<int>(seed % 10);
    const auto inst = oracle::random_chordal(p, seed + 40);
    const SymMatrix s = oracle::wishart(p, 3 * p, seed);
    const Eigen::MatrixXd expect = chordal_mle(s, inst);
    CAPTURE(seed);
    CHECK(oracle::max_abs_diff(ipf_mle(s, inst.graph, tight()).omega.matrix(), expect) <
          1e-6);
    CHECK(oracle::max_abs_diff(gipf_mle(s, inst.graph, tight()).omega.matrix(), expect) <
          1e-6);
  }
}

TEST_CASE("baselines: monotone objective, membership, agreement, warm start") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const int p = 5 + static_cast<int>(seed % 20);
    const Graph g = oracle::random_graph(p, 2.5 / p, seed + 500);
    const SymMatrix s = oracle::wishart(p, 3 * p, seed);
    const double tol = 1e-9;
    const IterativeResult ipf = ipf_mle(s, g, tight(tol));
    const IterativeResult gipf = gipf_mle(s, g, tight(tol));
    CAPTURE(seed);
    CHECK(ipf.converged);
    CHECK(gipf.converged);
    CHECK(non_increasing(ipf.history));
    CHECK(non_increasing(gipf.history));
    CHECK(ipf.neg_loglik == doctest::Approx(ipf.history.back()));
    CHECK(verify_membership(ipf.omega, g, 1e-8).pass);
    CHECK(verify_membership(gipf.omega, g, 1e-8).pass);
    CHECK(oracle::max_abs_diff(ipf.omega.matrix(), gipf.omega.matrix()) <= 10 * tol);

    IterativeConfig warm = tight(tol);
    warm.init = WarmStart{cca_estimate(s, g).omega_hat};
    const IterativeResult warmed = gipf_mle(s, g, warm);
    CHECK(warmed.iterations <= gipf.iterations);
    CHECK(oracle::max_abs_diff(warmed.omega.matrix(), gipf.omega.matrix()) <= 10 * tol);
  }
}

TEST_CASE("initializations") {
  const int p = 8;
  const Graph g = gen_named_graph(CycleGraph{p});
  const SymMatrix s = oracle::wishart(p, 3 * p, 2);
  IterativeConfig identity = tight();
  identity.init = IdentityScaledInit{};
  const IterativeResult a = gipf_mle(s, g, identity);
  const IterativeResult b = gipf_mle(s, g, tight());
  const SymMatrix scaled(Eigen::MatrixXd::Identity(p, p) * (p / s.matrix().trace()));
  CHECK(a.history[0] == doctest::Approx(neg_loglik(scaled, s)));
  Eigen::VectorXd inv_diag = s.matrix().diagonal().cwiseInverse();
  CHECK(b.history[0] == doctest::Approx(neg_loglik(SymMatrix::diagonal(inv_diag), s)));
  CHECK(oracle::max_abs_diff(a.omega.matrix(), b.omega.matrix()) < 1e-8);

  IterativeConfig bad = tight();
  bad.init = WarmStart{SymMatrix::identity(p + 1)};
  CHECK_THROWS_AS(gipf_mle(s, g, bad), InputError);
  IterativeConfig zero_tol;
  zero_tol.tol = 0;
  CHECK_THROWS_AS(ipf_mle(s, g, zero_tol), InputError);
  IterativeConfig no_iter;
  no_iter.max_iter = 0;
  CHECK_THROWS_AS(gipf_mle(s, g, no_iter), InputError);
}

TEST_CASE("non-convergence is flagged, not thrown") {
  const int p = 10;
  const Graph g = gen_named_graph(CycleGraph{p});
  const SymMatrix s = oracle::wishart(p, 3 * p, 4);
  IterativeConfig one;
  one.tol = 1e-14;
  one.max_iter = 1;
  const IterativeResult r = gipf_mle(s, g, one);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.final_delta > 0);
}

TEST_CASE("IPF clique cap") {
  const Graph dense = gen_named_graph(Multipartite3Graph{4});
  const SymMatrix s = oracle::wishart(12, 40, 1);
  IterativeConfig cfg;
  cfg.clique_cap = 50;
  CHECK_THROWS_AS(ipf_mle(s, dense, cfg), ResourceError);
}
