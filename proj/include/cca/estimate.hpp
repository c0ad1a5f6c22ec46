#pragma once

#include <optional>
#include <string>
#include <variant>

#include "cca/chordal.hpp"
#include "cca/cov.hpp"
#include "cca/graph.hpp"

namespace cca {

/// Single pass over the fill-in entries in traversal order, setting each so
/// that the matching entry of L L^T vanishes. Diagonal and E_sigma entries
/// are copied bitwise.
CholFactor cca_adjust(const CholFactor& ld, const OrderedGraph& og,
                      const FilledGraph& fg);

struct NaturalOrdering {};
struct RcmOrdering {};
using OrderingChoice = std::variant<NaturalOrdering, RcmOrdering, VertexOrdering>;

enum class PathPolicy { automatic, column, dense };

struct EstimateOptions {
  OrderingChoice ordering = RcmOrdering{};
  PathPolicy path = PathPolicy::automatic;
  int threads = 1;
  /// Eigenvalue and non-edge diagnostics; costs O(p^3) on top of the fit.
  bool diagnostics = true;
};

struct PhaseTimes {
  double ordering = 0.0;
  double fill = 0.0;
  double step1 = 0.0;
  double step2 = 0.0;
  double total() const { return ordering + fill + step1 + step2; }
};

struct EstimateReport {
  /// In original vertex labels.
  SymMatrix omega_hat;
  /// In position labels of `sigma`; block lower-triangular by component.
  CholFactor l_hat;
  VertexOrdering sigma;
  double min_eigenvalue = 0.0;
  double max_nonedge_abs = 0.0;
  PhaseTimes timings;
  /// "column", "dense" or "mixed" when components took different paths.
  std::string path;
  std::size_t components = 0;
  std::size_t fillins = 0;
  std::size_t filled_edges = 0;
};

/// Ordering, filled graph, Step I and Step II per connected component, with
/// the blocks assembled in original labels. Throws InputError on shape,
/// symmetry or diagonal problems and NumericalError (naming the component)
/// when Step I breaks down.
EstimateReport cca_estimate(const SymMatrix& s, const Graph& g,
                            const EstimateOptions& opts = {});

struct MembershipReport {
  double min_eigenvalue = 0.0;
  double max_off_pattern = 0.0;
  /// 0-based position of the largest violation, if any non-edge is non-zero.
  std::optional<Edge> worst;
  bool pass = false;
};

/// Checks omega against the zero pattern of `pattern`: passes iff the
/// minimum eigenvalue is positive and max off-pattern |omega_ij| is at most
/// tol * max|omega|.
MembershipReport verify_membership(const SymMatrix& omega, const Graph& pattern,
                                   double tol);
/// Same check against og.graph() (original labels).
MembershipReport verify_membership(const SymMatrix& omega,
                                   const OrderedGraph& og, double tol);

/// Sum over E_sigma and the diagonal of (ld_ij - l_ij)^2.
double step2_objective(const CholFactor& l, const CholFactor& ld,
                       const OrderedGraph& og);

}  // namespace cca
