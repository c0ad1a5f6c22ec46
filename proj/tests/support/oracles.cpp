#include "oracles.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace oracle {

namespace {

std::vector<std::vector<char>> adjacency(const Graph& g) {
  const int p = g.size();
  std::vector<std::vector<char>> a(p, std::vector<char>(p, 0));
  for (const auto& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1;
  return a;
}

}  // namespace

std::vector<std::vector<int>> brute_cliques(const Graph& g) {
  const int p = g.size();
  const auto a = adjacency(g);
  std::vector<std::uint32_t> cliques;
  for (std::uint32_t mask = 1; mask < (1u << p); ++mask) {
    bool clique = true;
    for (int u = 0; u < p && clique; ++u) {
      if (!(mask >> u & 1)) continue;
      for (int v = u + 1; v < p && clique; ++v) {
        if ((mask >> v & 1) && !a[u][v]) clique = false;
      }
    }
    if (clique) cliques.push_back(mask);
  }
  std::vector<std::vector<int>> out;
  for (std::uint32_t m : cliques) {
    bool maximal = true;
    for (int w = 0; w < p && maximal; ++w) {
      if (m >> w & 1) continue;
      bool joins = true;
      for (int u = 0; u < p && joins; ++u) {
        if ((m >> u & 1) && !a[u][w]) joins = false;
      }
      if (joins) maximal = false;
    }
    if (!maximal) continue;
    std::vector<int> c;
    for (int u = 0; u < p; ++u) {
      if (m >> u & 1) c.push_back(u);
    }
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::pair<int, int>> elimination_game(const Graph& g) {
  const int p = g.size();
  auto a = adjacency(g);
  for (int k = 0; k < p; ++k) {
    std::vector<int> later;
    for (int u = k + 1; u < p; ++u) {
      if (a[k][u]) later.push_back(u);
    }
    for (int x : later) {
      for (int y : later) {
        if (x != y) a[x][y] = 1;
      }
    }
  }
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < i; ++j) {
      if (a[i][j]) out.insert({i, j});
    }
  }
  return out;
}

int fill_count(const Graph& g, const std::vector<int>& order) {
  const int p = g.size();
  auto a = adjacency(g);
  std::vector<char> gone(p, 0);
  int fill = 0;
  for (int v : order) {
    std::vector<int> later;
    for (int u = 0; u < p; ++u) {
      if (!gone[u] && u != v && a[v][u]) later.push_back(u);
    }
    for (std::size_t x = 0; x < later.size(); ++x) {
      for (std::size_t y = x + 1; y < later.size(); ++y) {
        if (!a[later[x]][later[y]]) {
          a[later[x]][later[y]] = a[later[y]][later[x]] = 1;
          ++fill;
        }
      }
    }
    gone[v] = 1;
  }
  return fill;
}

int min_fill(const Graph& g) {
  std::vector<int> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  int best = fill_count(g, order);
  while (std::next_permutation(order.begin(), order.end())) {
    best = std::min(best, fill_count(g, order));
  }
  return best;
}

int min_bandwidth(const Graph& g) {
  std::vector<int> pos(g.size());
  std::iota(pos.begin(), pos.end(), 0);
  const auto edges = g.edges();
  int best = g.size();
  do {
    int bw = 0;
    for (const auto& e : edges) bw = std::max(bw, std::abs(pos[e.u] - pos[e.v]));
    best = std::min(best, bw);
  } while (std::next_permutation(pos.begin(), pos.end()));
  return best;
}

bool perfect_elimination_by_triples(const Graph& g) {
  const int p = g.size();
  const auto a = adjacency(g);
  for (int w = 0; w < p; ++w) {
    for (int v = w + 1; v < p; ++v) {
      for (int u = v + 1; u < p; ++u) {
        if (a[u][w] && a[v][w] && !a[u][v]) return false;
      }
    }
  }
  return true;
}

std::vector<std::vector<int>> brute_dependencies(const cca::FilledGraph& fg) {
  const auto& fills = fg.fillins;
  auto in_filled = [&](int x, int y) { return fg.filled.has_edge(x, y); };
  std::vector<std::vector<int>> deps(fills.size());
  for (std::size_t r = 0; r < fills.size(); ++r) {
    const int i = fills[r].u;
    const int j = fills[r].v;
    for (std::size_t t = 0; t < r; ++t) {
      const int a = fills[t].u;
      const int k = fills[t].v;
      if (k >= j) continue;
      if (a == j && in_filled(i, k)) deps[r].push_back(static_cast<int>(t));
      if (a == i && in_filled(j, k)) deps[r].push_back(static_cast<int>(t));
    }
  }
  return deps;
}

Graph random_graph(int p, double prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(prob);
  Graph g(p);
  for (int u = 0; u < p; ++u) {
    for (int v = u + 1; v < p; ++v) {
      if (coin(rng)) g.add_edge(u, v);
    }
  }
  return g;
}

ChordalInstance random_chordal(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Built on positions: below[k] is a clique-closed subset of later vertices.
  std::vector<std::vector<int>> below(p);
  for (int k = p - 2; k >= 0; --k) {
    std::uniform_int_distribution<int> pick(k + 1, p - 1);
    const int parent = pick(rng);
    std::vector<int> pool{parent};
    pool.insert(pool.end(), below[parent].begin(), below[parent].end());
    std::bernoulli_distribution keep(0.6);
    std::vector<int> chosen{parent};
    for (std::size_t x = 1; x < pool.size(); ++x) {
      if (keep(rng)) chosen.push_back(pool[x]);
    }
    // Occasionally leave a vertex without later neighbours (forest).
    if (std::bernoulli_distribution(0.1)(rng)) chosen.clear();
    std::sort(chosen.begin(), chosen.end());
    below[k] = chosen;
  }
  std::vector<int> label(p);
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin(), label.end(), rng);
  Graph g(p);
  for (int k = 0; k < p; ++k) {
    for (int u : below[k]) g.add_edge(label[k], label[u]);
  }
  std::vector<int> position(p);
  for (int k = 0; k < p; ++k) position[label[k]] = k;
  return ChordalInstance{g, cca::VertexOrdering(position)};
}

Eigen::MatrixXd random_spd(int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(p, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) a(i, j) = normal(rng);
  }
  Eigen::MatrixXd s = a * a.transpose() / p + Eigen::MatrixXd::Identity(p, p);
  return 0.5 * (s + s.transpose());
}

cca::SymMatrix wishart(int p, int n, std::uint64_t seed,
                       const Eigen::MatrixXd& sigma) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  if (sigma.size() != 0) {
    Eigen::MatrixXd chol = sigma.llt().matrixL();
    x = x * chol.transpose();
  }
  Eigen::MatrixXd s = x.transpose() * x / n;
  return cca::SymMatrix(0.5 * (s + s.transpose()));
}

Eigen::MatrixXd random_precision_on(const Graph& g, std::uint64_t seed) {
  const int p = g.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::bernoulli_distribution sign(0.5);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  for (const auto& e : g.edges()) {
    const double v = (sign(rng) ? -1.0 : 1.0) * mag(rng);
    omega(e.u, e.v) = omega(e.v, e.u) = v;
  }
  // Diagonal dominance guarantees definiteness.
  for (int i = 0; i < p; ++i) {
    omega(i, i) = omega.row(i).cwiseAbs().sum() + 0.5 + mag(rng);
  }
  return omega;
}

std::vector<std::pair<int, double>> cycle_fill_closed_form(
    const cca::CholFactor& ld) {
  const int p = ld.dim();
  // 1-based accessor
  auto L = [&](int i, int j) { return ld(i - 1, j - 1); };
  std::vector<std::pair<int, double>> out;
  for (int i = 3; i <= p - 1; ++i) {
    double v = ((i - 2) % 2 == 0 ? 1.0 : -1.0) * L(i, i - 2) * (L(2, 1) / L(2, 2));
    for (int j = 3; j <= i - 1; ++j) v *= L(j, j - 2) / L(j, j);
    out.emplace_back(i - 1, v);
  }
  return out;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd four_cycle_omega() {
  Eigen::MatrixXd o(4, 4);
  o << 3, 1, 0, 1,  //
      1, 3, 1, 0,   //
      0, 1, 3, 2,   //
      1, 0, 2, 3;
  return o;
}

}  // namespace oracle
