#pragma once

// Undirected graphs, vertex orderings, the filled (decomposable cover) graph
// and the structural diagnostics derived from it.
//
// Vertices are 0-based internally. File formats and user-facing reports are
// 1-based; see io.hpp.

#include <cstddef>
#include <span>
#include <vector>

namespace cca {

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices 0..p-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int p);
  /// Throws InputError on self-loops or out-of-range endpoints.
  /// Duplicate and mirrored pairs collapse.
  Graph(int p, std::span<const Edge> edges);

  int size() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  bool has_edge(int u, int v) const;
  std::span<const int> neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  /// Returns false when the edge already existed.
  bool add_edge(int u, int v);

  /// Canonical edge list, u < v, sorted.
  std::vector<Edge> edges() const;

  /// Subgraph induced by `vertices` (sorted or not); vertex k of the result
  /// corresponds to vertices[k].
  Graph induced(std::span<const int> vertices) const;

  static Graph complete(int p);

 private:
  std::vector<std::vector<int>> adj_;
  std::size_t edge_count_ = 0;
};

/// A permutation mapping each vertex label to its position.
class VertexOrdering {
 public:
  VertexOrdering() = default;
  /// `position_of[v]` is the position of vertex v. Throws InputError unless
  /// the image is exactly 0..p-1.
  explicit VertexOrdering(std::vector<int> position_of);

  static VertexOrdering identity(int p);
  /// Builds the ordering that places `labels[k]` at position k.
  static VertexOrdering from_sequence(std::span<const int> labels);

  int size() const { return static_cast<int>(position_of_.size()); }
  int position(int vertex) const { return position_of_[vertex]; }
  int vertex_at(int position) const { return vertex_at_[position]; }
  const std::vector<int>& positions() const { return position_of_; }
  /// Vertex labels listed in order of position.
  const std::vector<int>& sequence() const { return vertex_at_; }
  VertexOrdering inverse() const;

  friend bool operator==(const VertexOrdering& a, const VertexOrdering& b) {
    return a.position_of_ == b.position_of_;
  }

 private:
  std::vector<int> position_of_;
  std::vector<int> vertex_at_;
};

/// A graph together with an ordering; `relabeled()` is the graph on positions.
class OrderedGraph {
 public:
  OrderedGraph(Graph graph, VertexOrdering sigma);

  const Graph& graph() const { return graph_; }
  const VertexOrdering& sigma() const { return sigma_; }
  /// E_sigma: the edge set expressed in positions.
  const Graph& relabeled() const { return relabeled_; }
  int size() const { return graph_.size(); }

 private:
  Graph graph_;
  VertexOrdering sigma_;
  Graph relabeled_;
};

/// The minimal decomposable cover of an ordered graph, in position labels.
struct FilledGraph {
  OrderedGraph base;
  Graph filled;
  /// Fill-in positions (i, j), i > j, in row-major lower-triangular scan order.
  std::vector<Edge> fillins;
  /// below[j] = sorted {i > j : (i, j) in filled}.
  std::vector<std::vector<int>> below;
  /// row[i] = sorted {j < i : (i, j) in filled}.
  std::vector<std::vector<int>> row;

  int size() const { return filled.size(); }
  bool is_fillin(int i, int j) const;
  std::vector<int> row_counts() const;
  /// The filled graph viewed as an ordered graph under the identity ordering.
  OrderedGraph as_ordered() const;
};

OrderedGraph apply_ordering(const Graph& g, const VertexOrdering& sigma);

/// Reverse Cuthill-McKee. Components are handled in order of their smallest
/// label; each starts from a pseudo-peripheral vertex; ties go to the lowest
/// label.
VertexOrdering rcm_ordering(const Graph& g);

/// Elimination-tree symbolic factorization of the relabeled graph.
FilledGraph filled_graph(const OrderedGraph& og);

/// True iff each vertex's higher-positioned neighbourhood is a clique.
bool is_perfect_elimination(const OrderedGraph& og);

/// Bron-Kerbosch with pivoting. Each clique sorted; list sorted
/// lexicographically. Throws ResourceError past `cap` cliques.
std::vector<std::vector<int>> maximal_cliques(const Graph& g,
                                              std::size_t cap = 1'000'000);

/// Components sorted by smallest vertex; each component sorted.
std::vector<std::vector<int>> connected_components(const Graph& g);

int bandwidth(const Graph& g);

struct SccaReport {
  long long a_D = 0;
  long long a_tilde_D = 0;
  std::size_t c = 0;
  /// dependency sets F_r (0-based fill indices), one per fill-in
  std::vector<std::vector<int>> dependencies;
  /// g(r) = (3/delta)(2 + sum g over F_r), g(1) = 6/delta
  std::vector<double> g_values;
  /// g(r) = (3/delta) sum g over F_r, g(1) = 6/delta
  std::vector<double> g_values_unshifted;
  double s_cca = 0.0;
  double delta = 0.0;
};

/// Throws InputError unless delta > 0.
SccaReport s_cca_diagnostics(const FilledGraph& fg, double delta);

enum class Step1Path { column, dense };

struct ComplexityReport {
  double sum_n_cubed = 0.0;
  double p_times_fillins = 0.0;
  double p_cubed = 0.0;
  std::size_t filled_edges = 0;
  Step1Path path = Step1Path::column;
};

/// Column formula when |E^D| <= p^(5/3), dense otherwise.
ComplexityReport complexity_estimate(const FilledGraph& fg);

}  // namespace cca
