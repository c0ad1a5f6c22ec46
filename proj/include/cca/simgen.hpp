#pragma once

// Synthetic models, named graph families, samplers and the benchmark harness.
// Every generator is a pure function of its parameters and seed.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cca/chordal.hpp"
#include "cca/cov.hpp"
#include "cca/graph.hpp"

namespace cca {

struct SyntheticModel {
  SymMatrix omega_true;
  CholFactor l_true;
  /// Exact off-diagonal support of omega_true.
  Graph graph;
  std::uint64_t seed = 0;
};

/// Lower-triangular L with k = min(round(nnz_per_p * p), p(p-1)/2)
/// below-diagonal entries at uniformly random positions, magnitudes
/// U[0.3, 0.7] with exactly floor(k/2) negative signs, diagonal U[2, 5];
/// Omega = L L^T.
SyntheticModel gen_random_model(int p, std::uint64_t seed,
                                double nnz_per_p = 2.0);

/// (a+1) x (b+1) lattice; vertex (r, c) has label r*(b+1) + c.
struct GridGraph {
  int a;
  int b;
};
struct CycleGraph {
  int p;
};
/// Complete bipartite between the last m labels and the first p-m.
struct BipartiteGraph {
  int m;
  int p;
};
/// p = 3m; labels 3i, 3i+1, 3i+2 form part i; edges join different parts.
struct Multipartite3Graph {
  int m;
};
/// Complete graph minus (p, p-2) and (p-1, p-3) in 1-based labels.
struct AlmostCompleteGraph {
  int p;
};
using NamedGraph = std::variant<GridGraph, CycleGraph, BipartiteGraph,
                                Multipartite3Graph, AlmostCompleteGraph>;

Graph gen_named_graph(const NamedGraph& kind);

/// Parses "grid:3x3", "cycle:8", "bipartite:2,6", "multipartite3:4" and
/// "almost_complete:6".
NamedGraph parse_named_graph(const std::string& text);

/// Rows solve L^T x = z for standard normal z, so cov(x) = Omega^{-1}.
DataMatrix sample_gaussian(const SyntheticModel& model, int n,
                           std::uint64_t seed);

/// Gaussian rows (same stream as sample_gaussian) divided by
/// sqrt(chi2_df / df). `fixed_mixing` replaces every mixing variable.
DataMatrix sample_mvt(const SyntheticModel& model, double df, int n,
                      std::uint64_t seed,
                      std::optional<double> fixed_mixing = std::nullopt);

/// ||est - truth||_F / ||truth||_F
double rel_frobenius_error(const SymMatrix& est, const SymMatrix& truth);

/// SplitMix64 finalizer of (a, b); used for all derived seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

enum class BenchMethod { cca, ipf, gipf, cca_warm_gipf };
std::string to_string(BenchMethod m);
BenchMethod parse_bench_method(const std::string& name);

struct Distribution {
  /// Empty for Gaussian data, otherwise multivariate t with this df.
  std::optional<double> df;
  std::string name() const;
};
Distribution parse_distribution(const std::string& name);

struct BenchCell {
  int p = 200;
  int n = 100;
  Distribution dist;
  std::vector<BenchMethod> methods{BenchMethod::cca, BenchMethod::gipf};
  int reps = 20;
  std::uint64_t base_seed = 1;
  double nnz_per_p = 2.0;
};

struct BenchRow {
  std::string method;
  int p = 0;
  int n = 0;
  std::uint64_t seed = 0;
  double time_seconds = 0.0;
  double rel_frob = 0.0;
  std::string dist;
  int iterations = 0;
  bool converged = true;
};

struct BenchSummary {
  std::string method;
  int p = 0;
  int n = 0;
  std::string dist;
  int reps = 0;
  double mean_time_seconds = 0.0;
  double mean_rel_frob = 0.0;
  double mean_iterations = 0.0;
  int non_converged = 0;
};

struct BenchOptions {
  double tol = 1e-8;
  int max_iter = 5000;
  /// Data generation only; timed method runs never overlap.
  int threads = 1;
};

/// Rep r of a cell uses model seed mix_seed(base_seed, r), shared by all
/// cells with the same p, and data seed mix_seed(model seed, n).
std::vector<BenchRow> run_benchmark(const std::vector<BenchCell>& cells,
                                    const BenchOptions& opts = {});

/// Means per (cell, method), in first-appearance order.
std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows);

}  // namespace cca
