#include "cca/simgen.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "cca/baselines.hpp"
#include "cca/error.hpp"
#include "cca/estimate.hpp"
#include "parallel.hpp"

namespace cca {

namespace {

constexpr double kSupportCutoff = 1e-12;

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("invalid " + what + ": '" + text + "'");
  }
  return v;
}

// Row-major index t over the strict lower triangle -> (i, j), i > j.
Edge lower_position(long long t) {
  long long i = static_cast<long long>((1.0 + std::sqrt(1.0 + 8.0 * t)) / 2.0);
  while (i * (i - 1) / 2 > t) --i;
  while ((i + 1) * i / 2 <= t) ++i;
  return Edge{static_cast<int>(i), static_cast<int>(t - i * (i - 1) / 2)};
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SyntheticModel gen_random_model(int p, std::uint64_t seed, double nnz_per_p) {
  if (p < 2) throw InputError("random model needs p >= 2");
  if (!(nnz_per_p >= 0.0) || !std::isfinite(nnz_per_p)) {
    throw InputError("nnz_per_p must be a non-negative number");
  }
  std::mt19937_64 rng(seed);
  const long long slots = static_cast<long long>(p) * (p - 1) / 2;
  const long long k =
      std::min<long long>(std::llround(nnz_per_p * p), slots);

  // Floyd's sampling without replacement.
  std::set<long long> chosen;
  for (long long t = slots - k; t < slots; ++t) {
    std::uniform_int_distribution<long long> pick(0, t);
    const long long r = pick(rng);
    if (!chosen.insert(r).second) chosen.insert(t);
  }
  std::vector<double> sign(static_cast<std::size_t>(k), 1.0);
  std::fill(sign.begin(), sign.begin() + k / 2, -1.0);
  std::shuffle(sign.begin(), sign.end(), rng);

  std::uniform_real_distribution<double> off(0.3, 0.7);
  std::uniform_real_distribution<double> diag(2.0, 5.0);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
  std::vector<std::vector<int>> below(static_cast<std::size_t>(p));
  std::size_t s = 0;
  for (long long t : chosen) {
    const Edge e = lower_position(t);
    l(e.u, e.v) = sign[s++] * off(rng);
    below[e.v].push_back(e.u);
  }
  for (auto& b : below) std::sort(b.begin(), b.end());
  for (int i = 0; i < p; ++i) l(i, i) = diag(rng);

  Eigen::MatrixXd omega = l * l.transpose();
  Graph g(p);
  for (int j = 0; j < p; ++j) {
    for (int i = j + 1; i < p; ++i) {
      if (std::abs(omega(i, j)) > kSupportCutoff) {
        g.add_edge(i, j);
      } else {
        omega(i, j) = omega(j, i) = 0.0;
      }
    }
  }
  return SyntheticModel{SymMatrix(std::move(omega)),
                        CholFactor(std::move(l), std::move(below)),
                        std::move(g), seed};
}

Graph gen_named_graph(const NamedGraph& kind) {
  return std::visit(
      [](const auto& k) -> Graph {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, GridGraph>) {
          if (k.a < 1 || k.b < 1) throw InputError("grid needs a, b >= 1");
          const int cols = k.b + 1;
          Graph g((k.a + 1) * cols);
          for (int r = 0; r <= k.a; ++r) {
            for (int c = 0; c <= k.b; ++c) {
              const int v = r * cols + c;
              if (c < k.b) g.add_edge(v, v + 1);
              if (r < k.a) g.add_edge(v, v + cols);
            }
          }
          return g;
        } else if constexpr (std::is_same_v<K, CycleGraph>) {
          if (k.p < 3) throw InputError("cycle needs p >= 3");
          Graph g(k.p);
          for (int v = 0; v < k.p; ++v) g.add_edge(v, (v + 1) % k.p);
          return g;
        } else if constexpr (std::is_same_v<K, BipartiteGraph>) {
          if (k.m < 1 || 2 * k.m > k.p) {
            throw InputError("bipartite needs 1 <= m <= p/2");
          }
          Graph g(k.p);
          for (int a = k.p - k.m; a < k.p; ++a) {
            for (int b = 0; b < k.p - k.m; ++b) g.add_edge(a, b);
          }
          return g;
        } else if constexpr (std::is_same_v<K, Multipartite3Graph>) {
          if (k.m < 1) throw InputError("multipartite3 needs m >= 1");
          const int p = 3 * k.m;
          Graph g(p);
          for (int u = 0; u < p; ++u) {
            for (int v = u + 1; v < p; ++v) {
              if (u / 3 != v / 3) g.add_edge(u, v);
            }
          }
          return g;
        } else {
          if (k.p < 4) throw InputError("almost_complete needs p >= 4");
          Graph g(k.p);
          for (int u = 0; u < k.p; ++u) {
            for (int v = u + 1; v < k.p; ++v) {
              const bool removed = (v == k.p - 1 && u == k.p - 3) ||
                                   (v == k.p - 2 && u == k.p - 4);
              if (!removed) g.add_edge(u, v);
            }
          }
          return g;
        }
      },
      kind);
}

NamedGraph parse_named_graph(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InputError("graph family must look like 'cycle:8', got '" + text + "'");
  }
  const std::string family = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  auto split2 = [&](char sep) {
    const auto at = args.find(sep);
    if (at == std::string::npos) {
      throw InputError("'" + family + "' needs two parameters");
    }
    return std::pair{parse_int(args.substr(0, at), family + " parameter"),
                     parse_int(args.substr(at + 1), family + " parameter")};
  };
  if (family == "grid") {
    auto [a, b] = split2('x');
    return GridGraph{a, b};
  }
  if (family == "cycle") return CycleGraph{parse_int(args, "cycle size")};
  if (family == "bipartite") {
    auto [m, p] = split2(',');
    return BipartiteGraph{m, p};
  }
  if (family == "multipartite3") {
    return Multipartite3Graph{parse_int(args, "multipartite3 size")};
  }
  if (family == "almost_complete") {
    return AlmostCompleteGraph{parse_int(args, "almost_complete size")};
  }
  throw InputError("unknown graph family '" + family + "'");
}

DataMatrix sample_gaussian(const SyntheticModel& model, int n,
                           std::uint64_t seed) {
  if (n < 1) throw InputError("sample size must be at least 1");
  const int p = model.l_true.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  // Column r of zt is observation r.
  Eigen::MatrixXd zt(p, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < p; ++c) zt(c, r) = normal(rng);
  }
  model.l_true.matrix()
      .triangularView<Eigen::Lower>()
      .transpose()
      .solveInPlace(zt);
  return DataMatrix{zt.transpose(), {}};
}

DataMatrix sample_mvt(const SyntheticModel& model, double df, int n,
                      std::uint64_t seed, std::optional<double> fixed_mixing) {
  if (!(df > 0.0)) throw InputError("degrees of freedom must be positive");
  if (fixed_mixing && !(*fixed_mixing > 0.0)) {
    throw InputError("fixed mixing value must be positive");
  }
  DataMatrix d = sample_gaussian(model, n, seed);
  std::mt19937_64 rng(mix_seed(seed, 0x6d6978ULL));
  std::chi_squared_distribution<double> chi2(df);
  for (int r = 0; r < n; ++r) {
    const double w = fixed_mixing ? *fixed_mixing : std::sqrt(chi2(rng) / df);
    d.values.row(r) /= w;
  }
  return d;
}

double rel_frobenius_error(const SymMatrix& est, const SymMatrix& truth) {
  if (est.dim() != truth.dim()) throw InputError("dimension mismatch");
  const double denom = truth.matrix().norm();
  if (denom == 0.0) throw InputError("reference matrix is zero");
  return (est.matrix() - truth.matrix()).norm() / denom;
}

std::string to_string(BenchMethod m) {
  switch (m) {
    case BenchMethod::cca:
      return "cca";
    case BenchMethod::ipf:
      return "ipf";
    case BenchMethod::gipf:
      return "gipf";
    case BenchMethod::cca_warm_gipf:
      return "cca_warm_gipf";
  }
  return {};
}

BenchMethod parse_bench_method(const std::string& name) {
  for (auto m : {BenchMethod::cca, BenchMethod::ipf, BenchMethod::gipf,
                 BenchMethod::cca_warm_gipf}) {
    if (to_string(m) == name) return m;
  }
  throw InputError("unknown method '" + name +
                   "' (expected cca, ipf, gipf or cca_warm_gipf)");
}

std::string Distribution::name() const {
  if (!df) return "gaussian";
  return "t" + std::to_string(static_cast<int>(*df));
}

Distribution parse_distribution(const std::string& name) {
  if (name == "gaussian") return {};
  if (name.size() > 1 && name[0] == 't') {
    const int df = parse_int(name.substr(1), "t degrees of freedom");
    if (df <= 0) throw InputError("t degrees of freedom must be positive");
    return Distribution{static_cast<double>(df)};
  }
  throw InputError("unknown distribution '" + name +
                   "' (expected gaussian or t<df>)");
}

namespace {

struct Prepared {
  SyntheticModel model;
  SymMatrix s;
  std::uint64_t seed = 0;
};

void validate_cell(const BenchCell& c) {
  if (c.p < 2) throw InputError("benchmark p must be at least 2");
  if (c.n < 2) throw InputError("benchmark n must be at least 2");
  if (c.reps < 1) throw InputError("benchmark reps must be at least 1");
  if (c.methods.empty()) throw InputError("benchmark needs at least one method");
}

}  // namespace

std::vector<BenchRow> run_benchmark(const std::vector<BenchCell>& cells,
                                    const BenchOptions& opts) {
  for (const auto& c : cells) validate_cell(c);
  using Clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  IterativeConfig iter;
  iter.tol = opts.tol;
  iter.max_iter = opts.max_iter;
  EstimateOptions est;
  est.diagnostics = false;

  for (const auto& cell : cells) {
    std::vector<Prepared> prep(static_cast<std::size_t>(cell.reps));
    detail::parallel_for(cell.reps, opts.threads, [&](int r) {
      const std::uint64_t seed = mix_seed(cell.base_seed, static_cast<std::uint64_t>(r));
      SyntheticModel model = gen_random_model(cell.p, seed, cell.nnz_per_p);
      const std::uint64_t data_seed = mix_seed(seed, static_cast<std::uint64_t>(cell.n));
      DataMatrix d = cell.dist.df ? sample_mvt(model, *cell.dist.df, cell.n, data_seed)
                                  : sample_gaussian(model, cell.n, data_seed);
      SymMatrix s = sample_covariance(d);
      prep[r] = Prepared{std::move(model), std::move(s), seed};
    });

    for (const Prepared& rep : prep) {
      for (BenchMethod m : cell.methods) {
        BenchRow row;
        row.method = to_string(m);
        row.p = cell.p;
        row.n = cell.n;
        row.seed = rep.seed;
        row.dist = cell.dist.name();
        const auto t0 = Clock::now();
        SymMatrix omega;
        switch (m) {
          case BenchMethod::cca:
            omega = cca_estimate(rep.s, rep.model.graph, est).omega_hat;
            break;
          case BenchMethod::ipf:
          case BenchMethod::gipf: {
            IterativeResult res = m == BenchMethod::ipf
                                      ? ipf_mle(rep.s, rep.model.graph, iter)
                                      : gipf_mle(rep.s, rep.model.graph, iter);
            row.iterations = res.iterations;
            row.converged = res.converged;
            omega = std::move(res.omega);
            break;
          }
          case BenchMethod::cca_warm_gipf: {
            IterativeConfig warm = iter;
            warm.init = WarmStart{cca_estimate(rep.s, rep.model.graph, est).omega_hat};
            IterativeResult res = gipf_mle(rep.s, rep.model.graph, warm);
            row.iterations = res.iterations;
            row.converged = res.converged;
            omega = std::move(res.omega);
            break;
          }
        }
        row.time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        row.rel_frob = rel_frobenius_error(omega, rep.model.omega_true);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows) {
  using Key = std::tuple<std::string, int, int, std::string>;
  std::map<Key, std::size_t> index;
  std::vector<BenchSummary> out;
  for (const auto& r : rows) {
    Key key{r.method, r.p, r.n, r.dist};
    auto [it, fresh] = index.try_emplace(key, out.size());
    if (fresh) out.push_back(BenchSummary{r.method, r.p, r.n, r.dist});
    BenchSummary& s = out[it->second];
    ++s.reps;
    s.mean_time_seconds += r.time_seconds;
    s.mean_rel_frob += r.rel_frob;
    s.mean_iterations += r.iterations;
    s.non_converged += r.converged ? 0 : 1;
  }
  for (auto& s : out) {
    s.mean_time_seconds /= s.reps;
    s.mean_rel_frob /= s.reps;
    s.mean_iterations /= s.reps;
  }
  return out;
}

}  // namespace cca
