#include "cca/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "cca/error.hpp"

namespace cca {

namespace {

void check_vertex(int v, int p) {
  if (v < 0 || v >= p) {
    throw InputError("vertex " + std::to_string(v + 1) + " out of range 1.." +
                     std::to_string(p));
  }
}

bool insert_sorted(std::vector<int>& list, int value) {
  auto it = std::lower_bound(list.begin(), list.end(), value);
  if (it != list.end() && *it == value) return false;
  list.insert(it, value);
  return true;
}

}  // namespace

Graph::Graph(int p) {
  if (p < 0) throw InputError("vertex count must be non-negative");
  adj_.resize(static_cast<std::size_t>(p));
}

Graph::Graph(int p, std::span<const Edge> edges) : Graph(p) {
  for (const Edge& e : edges) add_edge(e.u, e.v);
}

bool Graph::has_edge(int u, int v) const {
  if (u == v) return false;
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

bool Graph::add_edge(int u, int v) {
  check_vertex(u, size());
  check_vertex(v, size());
  if (u == v) {
    throw InputError("self-loop at vertex " + std::to_string(u + 1));
  }
  if (!insert_sorted(adj_[u], v)) return false;
  insert_sorted(adj_[v], u);
  ++edge_count_;
  return true;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (int u = 0; u < size(); ++u) {
    for (int v : adj_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

Graph Graph::induced(std::span<const int> vertices) const {
  std::vector<int> local(static_cast<std::size_t>(size()), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    local[vertices[k]] = static_cast<int>(k);
  }
  Graph sub(static_cast<int>(vertices.size()));
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (int w : adj_[vertices[k]]) {
      int lw = local[w];
      if (lw > static_cast<int>(k)) sub.add_edge(static_cast<int>(k), lw);
    }
  }
  return sub;
}

Graph Graph::complete(int p) {
  Graph g(p);
  for (int u = 0; u < p; ++u) {
    g.adj_[u].reserve(static_cast<std::size_t>(p - 1));
    for (int v = 0; v < p; ++v) {
      if (v != u) g.adj_[u].push_back(v);
    }
  }
  g.edge_count_ = static_cast<std::size_t>(p) * (p - 1) / 2;
  return g;
}

// ---------------------------------------------------------------------------

VertexOrdering::VertexOrdering(std::vector<int> position_of)
    : position_of_(std::move(position_of)),
      vertex_at_(position_of_.size(), -1) {
  const int p = static_cast<int>(position_of_.size());
  for (int v = 0; v < p; ++v) {
    int pos = position_of_[v];
    if (pos < 0 || pos >= p || vertex_at_[pos] != -1) {
      throw InputError("ordering is not a permutation of 1.." +
                       std::to_string(p));
    }
    vertex_at_[pos] = v;
  }
}

VertexOrdering VertexOrdering::identity(int p) {
  std::vector<int> id(static_cast<std::size_t>(p));
  std::iota(id.begin(), id.end(), 0);
  return VertexOrdering(std::move(id));
}

VertexOrdering VertexOrdering::from_sequence(std::span<const int> labels) {
  const int p = static_cast<int>(labels.size());
  std::vector<int> position_of(labels.size(), -1);
  for (int k = 0; k < p; ++k) {
    int v = labels[k];
    if (v < 0 || v >= p || position_of[v] != -1) {
      throw InputError("ordering is not a permutation of 1.." +
                       std::to_string(p));
    }
    position_of[v] = k;
  }
  return VertexOrdering(std::move(position_of));
}

VertexOrdering VertexOrdering::inverse() const {
  return VertexOrdering(vertex_at_);
}

// ---------------------------------------------------------------------------

OrderedGraph::OrderedGraph(Graph graph, VertexOrdering sigma)
    : graph_(std::move(graph)), sigma_(std::move(sigma)) {
  if (sigma_.size() != graph_.size()) {
    throw InputError("ordering has " + std::to_string(sigma_.size()) +
                     " entries for a graph on " +
                     std::to_string(graph_.size()) + " vertices");
  }
  relabeled_ = Graph(graph_.size());
  for (const Edge& e : graph_.edges()) {
    relabeled_.add_edge(sigma_.position(e.u), sigma_.position(e.v));
  }
}

OrderedGraph apply_ordering(const Graph& g, const VertexOrdering& sigma) {
  return OrderedGraph(g, sigma);
}

// ---------------------------------------------------------------------------

namespace {

struct LevelStructure {
  std::vector<int> last_level;
  int depth = 0;
};

LevelStructure bfs_levels(const Graph& g, int root, std::vector<int>& mark,
                          int stamp) {
  LevelStructure out;
  std::vector<int> current{root};
  mark[root] = stamp;
  while (true) {
    std::vector<int> next;
    for (int v : current) {
      for (int w : g.neighbors(v)) {
        if (mark[w] != stamp) {
          mark[w] = stamp;
          next.push_back(w);
        }
      }
    }
    if (next.empty()) break;
    ++out.depth;
    current = std::move(next);
  }
  out.last_level = std::move(current);
  return out;
}

int min_degree_vertex(const Graph& g, std::span<const int> candidates) {
  int best = candidates.front();
  for (int v : candidates) {
    if (g.degree(v) < g.degree(best) ||
        (g.degree(v) == g.degree(best) && v < best)) {
      best = v;
    }
  }
  return best;
}

int pseudo_peripheral(const Graph& g, std::span<const int> component,
                      std::vector<int>& mark, int& stamp) {
  int root = min_degree_vertex(g, component);
  LevelStructure ls = bfs_levels(g, root, mark, ++stamp);
  while (true) {
    int candidate = min_degree_vertex(g, ls.last_level);
    LevelStructure next = bfs_levels(g, candidate, mark, ++stamp);
    if (next.depth <= ls.depth) break;
    root = candidate;
    ls = std::move(next);
  }
  return root;
}

}  // namespace

VertexOrdering rcm_ordering(const Graph& g) {
  const int p = g.size();
  std::vector<int> mark(static_cast<std::size_t>(p), 0);
  int stamp = 0;
  std::vector<char> placed(static_cast<std::size_t>(p), 0);
  std::vector<int> cm;
  cm.reserve(static_cast<std::size_t>(p));

  for (const auto& component : connected_components(g)) {
    int root = pseudo_peripheral(g, component, mark, stamp);
    std::size_t head = cm.size();
    cm.push_back(root);
    placed[root] = 1;
    std::vector<int> fresh;
    while (head < cm.size()) {
      int v = cm[head++];
      fresh.clear();
      for (int w : g.neighbors(v)) {
        if (!placed[w]) fresh.push_back(w);
      }
      std::sort(fresh.begin(), fresh.end(), [&](int a, int b) {
        return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
      });
      for (int w : fresh) {
        placed[w] = 1;
        cm.push_back(w);
      }
    }
  }
  std::reverse(cm.begin(), cm.end());
  return VertexOrdering::from_sequence(cm);
}

// ---------------------------------------------------------------------------

bool FilledGraph::is_fillin(int i, int j) const {
  if (i < j) std::swap(i, j);
  return filled.has_edge(i, j) && !base.relabeled().has_edge(i, j);
}

std::vector<int> FilledGraph::row_counts() const {
  std::vector<int> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    out[i] = static_cast<int>(row[i].size());
  }
  return out;
}

OrderedGraph FilledGraph::as_ordered() const {
  return OrderedGraph(filled, VertexOrdering::identity(filled.size()));
}

FilledGraph filled_graph(const OrderedGraph& og) {
  const Graph& es = og.relabeled();
  const int p = es.size();
  std::vector<std::vector<int>> below(static_cast<std::size_t>(p));
  std::vector<std::vector<int>> children(static_cast<std::size_t>(p));
  std::vector<int> mark(static_cast<std::size_t>(p), -1);

  // Column structure of the symbolic Cholesky factor: the original higher
  // neighbours plus the structures of elimination-tree children.
  for (int j = 0; j < p; ++j) {
    auto& col = below[j];
    mark[j] = j;
    for (int i : es.neighbors(j)) {
      if (i > j && mark[i] != j) {
        mark[i] = j;
        col.push_back(i);
      }
    }
    for (int c : children[j]) {
      for (int i : below[c]) {
        if (mark[i] != j) {
          mark[i] = j;
          col.push_back(i);
        }
      }
    }
    std::sort(col.begin(), col.end());
    if (!col.empty()) children[col.front()].push_back(j);
  }

  FilledGraph fg{og, Graph(p), {}, std::move(below),
                 std::vector<std::vector<int>>(static_cast<std::size_t>(p))};
  for (int j = 0; j < p; ++j) {
    for (int i : fg.below[j]) {
      fg.filled.add_edge(i, j);
      fg.row[i].push_back(j);
    }
  }
  for (int i = 0; i < p; ++i) {
    for (int j : fg.row[i]) {
      if (!es.has_edge(i, j)) fg.fillins.push_back({i, j});
    }
  }
  return fg;
}

bool is_perfect_elimination(const OrderedGraph& og) {
  const Graph& g = og.relabeled();
  const int p = g.size();
  std::vector<int> higher;
  for (int k = 0; k < p; ++k) {
    higher.clear();
    for (int v : g.neighbors(k)) {
      if (v > k) higher.push_back(v);
    }
    if (higher.size() < 2) continue;
    // Over all k, this is equivalent to every higher neighbourhood being a
    // clique (Rose-Tarjan-Lueker).
    int m = higher.front();
    for (std::size_t t = 1; t < higher.size(); ++t) {
      if (!g.has_edge(m, higher[t])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> intersect(const std::vector<int>& a, std::span<const int> b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

struct CliqueSearch {
  const Graph& g;
  std::size_t cap;
  std::vector<std::vector<int>> found;

  void expand(std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
    if (p.empty() && x.empty()) {
      if (found.size() >= cap) {
        throw ResourceError("maximal clique enumeration exceeded cap of " +
                            std::to_string(cap) + " cliques");
      }
      auto clique = r;
      std::sort(clique.begin(), clique.end());
      found.push_back(std::move(clique));
      return;
    }
    // Tomita pivot: vertex of P u X with most neighbours in P.
    int pivot = -1;
    std::size_t best = 0;
    for (const auto* set : {&p, &x}) {
      for (int u : *set) {
        std::size_t count = intersect(p, g.neighbors(u)).size();
        if (pivot < 0 || count > best) {
          pivot = u;
          best = count;
        }
      }
    }
    std::vector<int> candidates;
    std::set_difference(p.begin(), p.end(), g.neighbors(pivot).begin(),
                        g.neighbors(pivot).end(),
                        std::back_inserter(candidates));
    for (int v : candidates) {
      r.push_back(v);
      expand(r, intersect(p, g.neighbors(v)), intersect(x, g.neighbors(v)));
      r.pop_back();
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
  }
};

}  // namespace

std::vector<std::vector<int>> maximal_cliques(const Graph& g, std::size_t cap) {
  CliqueSearch search{g, cap, {}};
  std::vector<int> all(static_cast<std::size_t>(g.size()));
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> r;
  if (!all.empty()) search.expand(r, std::move(all), {});
  std::sort(search.found.begin(), search.found.end());
  return std::move(search.found);
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
  const int p = g.size();
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < p; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (int w : g.neighbors(comp[head])) {
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

int bandwidth(const Graph& g) {
  int bw = 0;
  for (const Edge& e : g.edges()) bw = std::max(bw, std::abs(e.u - e.v));
  return bw;
}

// ---------------------------------------------------------------------------

SccaReport s_cca_diagnostics(const FilledGraph& fg, double delta) {
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  const int p = fg.size();
  SccaReport rep;
  rep.delta = delta;
  rep.c = fg.fillins.size();

  long long max_col = 0;
  long long max_row = 0;
  std::vector<long long> fill_col(static_cast<std::size_t>(p), 0);
  std::vector<long long> fill_row(static_cast<std::size_t>(p), 0);
  for (int j = 0; j < p; ++j) {
    max_col = std::max<long long>(max_col, fg.below[j].size());
    max_row = std::max<long long>(max_row, fg.row[j].size());
  }
  // fill index lookup, per row, sorted by column
  std::vector<std::vector<std::pair<int, int>>> fill_at(
      static_cast<std::size_t>(p));
  for (std::size_t r = 0; r < fg.fillins.size(); ++r) {
    const Edge& e = fg.fillins[r];
    ++fill_row[e.u];
    ++fill_col[e.v];
    fill_at[e.u].emplace_back(e.v, static_cast<int>(r));
  }
  auto fill_index = [&](int i, int k) {
    const auto& list = fill_at[i];
    auto it = std::lower_bound(list.begin(), list.end(),
                               std::pair<int, int>{k, -1});
    return (it != list.end() && it->first == k) ? it->second : -1;
  };

  rep.a_D = (1 + max_col) * (1 + max_row);
  rep.a_tilde_D = *std::max_element(fill_col.begin(), fill_col.end()) *
                  *std::max_element(fill_row.begin(), fill_row.end());

  rep.dependencies.resize(rep.c);
  rep.g_values.resize(rep.c);
  rep.g_values_unshifted.resize(rep.c);
  double max_g = 0.0;
  for (std::size_t r = 0; r < rep.c; ++r) {
    const auto [i, j] = fg.fillins[r];
    auto& deps = rep.dependencies[r];
    // k < j with both (i,k) and (j,k) in the filled pattern
    const auto& ri = fg.row[i];
    const auto& rj = fg.row[j];
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < ri.size() && b < rj.size() && ri[a] < j) {
      if (ri[a] < rj[b]) {
        ++a;
      } else if (rj[b] < ri[a]) {
        ++b;
      } else {
        int k = ri[a];
        if (int t = fill_index(j, k); t >= 0) deps.push_back(t);
        if (int t = fill_index(i, k); t >= 0) deps.push_back(t);
        ++a;
        ++b;
      }
    }
    std::sort(deps.begin(), deps.end());

    double sum = 0.0;
    double sum_unshifted = 0.0;
    for (int t : deps) {
      sum += rep.g_values[t];
      sum_unshifted += rep.g_values_unshifted[t];
    }
    if (r == 0) {
      rep.g_values[r] = 6.0 / delta;
      rep.g_values_unshifted[r] = 6.0 / delta;
    } else {
      rep.g_values[r] = (3.0 / delta) * (2.0 + sum);
      rep.g_values_unshifted[r] = (3.0 / delta) * sum_unshifted;
    }
    max_g = std::max(max_g, rep.g_values[r]);
  }

  double step1 = static_cast<double>(std::min<long long>(
      rep.a_D, static_cast<long long>(fg.filled.edge_count()) + 1));
  double step2 = 1.0;
  if (rep.c > 0) {
    step2 = static_cast<double>(rep.a_tilde_D) * (1.0 + max_g) * (1.0 + max_g);
  }
  rep.s_cca = step1 * step2;
  return rep;
}

ComplexityReport complexity_estimate(const FilledGraph& fg) {
  ComplexityReport rep;
  const double p = fg.size();
  for (const auto& col : fg.below) {
    double n = static_cast<double>(col.size());
    rep.sum_n_cubed += n * n * n;
  }
  rep.p_times_fillins = p * static_cast<double>(fg.fillins.size());
  rep.p_cubed = p * p * p;
  rep.filled_edges = fg.filled.edge_count();
  rep.path = static_cast<double>(rep.filled_edges) > std::pow(p, 5.0 / 3.0)
                 ? Step1Path::dense
                 : Step1Path::column;
  return rep;
}

}  // namespace cca
