#include "cca/estimate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "cca/error.hpp"

namespace cca {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

CholFactor cca_adjust(const CholFactor& ld, const OrderedGraph& og,
                      const FilledGraph& fg) {
  (void)og;  // the fill-in list is already relative to og's relabeled edges
  CholFactor l = ld;
  for (const Edge& e : fg.fillins) {
    const int i = e.u;
    const int j = e.v;
    const auto& ri = fg.row[i];
    const auto& rj = fg.row[j];
    // sum over k < j of L_ik L_jk, restricted to the filled pattern
    double sum = 0.0;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < ri.size() && b < rj.size() && ri[a] < j) {
      if (ri[a] < rj[b]) {
        ++a;
      } else if (rj[b] < ri[a]) {
        ++b;
      } else {
        sum += l(i, ri[a]) * l(j, rj[b]);
        ++a;
        ++b;
      }
    }
    l.at(i, j) = -sum / l(j, j);
  }
  return l;
}

EstimateReport cca_estimate(const SymMatrix& s, const Graph& g,
                            const EstimateOptions& opts) {
  const int p = g.size();
  if (s.dim() != p) {
    throw InputError("covariance is " + std::to_string(s.dim()) + "x" +
                     std::to_string(s.dim()) + " but graph has " +
                     std::to_string(p) + " vertices");
  }
  for (int i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0)) {
      throw InputError("covariance diagonal is not positive at index " +
                       std::to_string(i + 1));
    }
  }
  const auto* explicit_sigma = std::get_if<VertexOrdering>(&opts.ordering);
  if (explicit_sigma && explicit_sigma->size() != p) {
    throw InputError("ordering has " + std::to_string(explicit_sigma->size()) +
                     " entries, expected " + std::to_string(p));
  }

  EstimateReport rep;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd lmat = Eigen::MatrixXd::Zero(p, p);
  std::vector<std::vector<int>> pattern(static_cast<std::size_t>(p));
  std::vector<int> global_position(static_cast<std::size_t>(p), -1);
  bool used_column = false;
  bool used_dense = false;

  const auto components = connected_components(g);
  rep.components = components.size();
  int offset = 0;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const std::vector<int>& comp = components[c];
    const int m = static_cast<int>(comp.size());

    auto t0 = Clock::now();
    Graph sub = g.induced(comp);
    VertexOrdering local;
    if (std::holds_alternative<NaturalOrdering>(opts.ordering)) {
      local = VertexOrdering::identity(m);
    } else if (std::holds_alternative<RcmOrdering>(opts.ordering)) {
      local = rcm_ordering(sub);
    } else {
      std::vector<int> seq(static_cast<std::size_t>(m));
      for (int k = 0; k < m; ++k) seq[k] = k;
      std::sort(seq.begin(), seq.end(), [&](int a, int b) {
        return explicit_sigma->position(comp[a]) <
               explicit_sigma->position(comp[b]);
      });
      local = VertexOrdering::from_sequence(seq);
    }
    rep.timings.ordering += seconds_since(t0);

    t0 = Clock::now();
    OrderedGraph og(std::move(sub), local);
    FilledGraph fg = filled_graph(og);
    rep.timings.fill += seconds_since(t0);
    rep.fillins += fg.fillins.size();
    rep.filled_edges += fg.filled.edge_count();

    t0 = Clock::now();
    SymMatrix local_s = s.submatrix(comp).permuted(local);
    Step1Path path = Step1Path::column;
    if (opts.path == PathPolicy::dense) {
      path = Step1Path::dense;
    } else if (opts.path == PathPolicy::automatic) {
      path = complexity_estimate(fg).path;
    }
    (path == Step1Path::dense ? used_dense : used_column) = true;
    CholFactor ld;
    auto label_of = [&](int position) {
      return comp[local.vertex_at(position)] + 1;
    };
    try {
      ld = path == Step1Path::dense ? dense_step1(local_s, fg)
                                    : chordal_cholesky_mle(local_s, fg,
                                                           opts.threads);
    } catch (const ColumnFailure& e) {
      throw NumericalError("component " + std::to_string(c + 1) +
                           " (vertices " + std::to_string(comp.front() + 1) +
                           "..): Step I failed at variable " +
                           std::to_string(label_of(e.column())) +
                           "; the sample size is likely too small for the "
                           "largest clique of the filled graph");
    } catch (const NumericalError& e) {
      throw NumericalError("component " + std::to_string(c + 1) + ": " +
                           e.what());
    }
    rep.timings.step1 += seconds_since(t0);

    t0 = Clock::now();
    CholFactor l = cca_adjust(ld, og, fg);
    SymMatrix block = l.product();
    rep.timings.step2 += seconds_since(t0);

    for (int b = 0; b < m; ++b) {
      const int vb = comp[local.vertex_at(b)];
      global_position[vb] = offset + b;
      for (int a = 0; a < m; ++a) {
        omega(comp[local.vertex_at(a)], vb) = block(a, b);
      }
      for (int a = b; a < m; ++a) lmat(offset + a, offset + b) = l(a, b);
      for (int i : fg.below[b]) pattern[offset + b].push_back(offset + i);
    }
    offset += m;
  }

  rep.omega_hat = SymMatrix(std::move(omega));
  rep.l_hat = CholFactor(std::move(lmat), std::move(pattern));
  rep.sigma = VertexOrdering(std::move(global_position));
  rep.path = used_dense ? (used_column ? "mixed" : "dense") : "column";
  if (opts.diagnostics) {
    MembershipReport mem = verify_membership(rep.omega_hat, g, 1.0);
    rep.min_eigenvalue = mem.min_eigenvalue;
    rep.max_nonedge_abs = mem.max_off_pattern;
  }
  return rep;
}

MembershipReport verify_membership(const SymMatrix& omega, const Graph& pattern,
                                   double tol) {
  if (!(tol > 0.0)) throw InputError("membership tolerance must be positive");
  if (omega.dim() != pattern.size()) {
    throw InputError("matrix and graph dimensions differ");
  }
  MembershipReport rep;
  const int p = omega.dim();
  const double scale = p ? omega.matrix().cwiseAbs().maxCoeff() : 0.0;
  for (int j = 0; j < p; ++j) {
    for (int i = j + 1; i < p; ++i) {
      if (pattern.has_edge(i, j)) continue;
      const double v = std::abs(omega(i, j));
      if (v > rep.max_off_pattern) {
        rep.max_off_pattern = v;
        rep.worst = Edge{i, j};
      }
    }
  }
  rep.min_eigenvalue = min_eigenvalue(omega);
  rep.pass = rep.min_eigenvalue > 0.0 && rep.max_off_pattern <= tol * scale;
  return rep;
}

MembershipReport verify_membership(const SymMatrix& omega,
                                   const OrderedGraph& og, double tol) {
  return verify_membership(omega, og.graph(), tol);
}

double step2_objective(const CholFactor& l, const CholFactor& ld,
                       const OrderedGraph& og) {
  if (l.dim() != ld.dim() || l.dim() != og.size()) {
    throw InputError("factor dimensions differ");
  }
  double h = 0.0;
  for (int i = 0; i < l.dim(); ++i) {
    double d = ld(i, i) - l(i, i);
    h += d * d;
    for (int j : og.relabeled().neighbors(i)) {
      if (j >= i) break;
      d = ld(i, j) - l(i, j);
      h += d * d;
    }
  }
  return h;
}

}  // namespace cca
