#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "cca/error.hpp"
#include "cca/graph.hpp"
#include "cca/io.hpp"
#include "cca/simgen.hpp"
#include "support/oracles.hpp"

using namespace cca;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return read_graph(in);
}

Graph cycle(int p) { return gen_named_graph(CycleGraph{p}); }

FilledGraph rcm_filled(const Graph& g) {
  return filled_graph(apply_ordering(g, rcm_ordering(g)));
}

std::set<std::pair<int, int>> edge_set(const Graph& g) {
  std::set<std::pair<int, int>> out;
  for (const auto& e : g.edges()) out.insert({e.v, e.u});
  return out;
}

}  // namespace

TEST_CASE("parse_graph") {
  const Graph c4 = parse("p 4\n1 2\n2 3\n3 4\n4 1\n");
  CHECK(c4.size() == 4);
  CHECK(c4.edge_count() == 4);
  CHECK(c4.has_edge(3, 0));

  const Graph empty = parse("p 3\n");
  CHECK(empty.size() == 3);
  CHECK(empty.edge_count() == 0);

  CHECK(parse("p 2\n1 2\n2 1\n").edge_count() == 1);
  CHECK(parse("# header comment\np 3\n1 3 # trailing\n\n").edge_count() == 1);
}

TEST_CASE("parse_graph errors name the line") {
  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("p 3\n1 2\n1 4\n").find("line 3") != std::string::npos);
  CHECK(message("p 3\n2 2\n").find("line 2") != std::string::npos);
  CHECK(message("p 3\n1 x\n").find("line 2") != std::string::npos);
  CHECK(message("1 2\n") != "no error");
  CHECK(message("p 0\n") != "no error");
}

TEST_CASE("graph write/read round trip") {
  const Graph g = oracle::random_graph(9, 0.4, 3);
  std::ostringstream out;
  write_graph(out, g);
  CHECK(parse(out.str()).edges() == g.edges());
}

TEST_CASE("rcm on the path 3-1-2 reaches the minimum bandwidth") {
  const Graph path = parse("p 3\n3 1\n1 2\n");
  const auto og = apply_ordering(path, rcm_ordering(path));
  CHECK(oracle::min_bandwidth(path) == 1);
  CHECK(bandwidth(og.relabeled()) == 1);
}

TEST_CASE("rcm is a deterministic permutation") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = oracle::random_graph(25, 0.1, seed);
    const VertexOrdering a = rcm_ordering(g);
    std::vector<int> image = a.positions();
    std::sort(image.begin(), image.end());
    std::vector<int> expect(g.size());
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(image == expect);
    CHECK(rcm_ordering(g) == a);
  }
}

TEST_CASE("apply_ordering") {
  const Graph c4 = cycle(4);
  CHECK(apply_ordering(c4, VertexOrdering::identity(4)).relabeled().edges() ==
        c4.edges());

  // swap labels 3 and 4 (1-based)
  const auto og = apply_ordering(c4, VertexOrdering({0, 1, 3, 2}));
  const std::set<std::pair<int, int>> expect{{1, 0}, {3, 1}, {3, 2}, {2, 0}};
  CHECK(edge_set(og.relabeled()) == expect);

  const Graph g = oracle::random_graph(12, 0.3, 5);
  const VertexOrdering sigma = rcm_ordering(g);
  const auto forward = apply_ordering(g, sigma);
  CHECK(forward.relabeled().edge_count() == g.edge_count());
  CHECK(apply_ordering(forward.relabeled(), sigma.inverse()).relabeled().edges() ==
        g.edges());

  CHECK_THROWS_AS(VertexOrdering({0, 0, 1}), InputError);
  CHECK_THROWS_AS(VertexOrdering({0, 1, 3}), InputError);
}

TEST_CASE("filled_graph examples") {
  const FilledGraph natural =
      filled_graph(apply_ordering(cycle(4), VertexOrdering::identity(4)));
  REQUIRE(natural.fillins.size() == 1);
  CHECK(natural.fillins[0] == Edge{3, 1});

  CHECK(rcm_filled(cycle(4)).fillins.size() == 1);
  CHECK(rcm_filled(cycle(8)).fillins.size() == 5);

  Graph path(6);
  for (int v = 0; v + 1 < 6; ++v) path.add_edge(v, v + 1);
  CHECK(filled_graph(apply_ordering(path, VertexOrdering::identity(6)))
            .fillins.empty());
}

TEST_CASE("cycles under rcm have p-3 fill-ins") {
  for (int p = 4; p <= 12; ++p) {
    CAPTURE(p);
    CHECK(rcm_filled(cycle(p)).fillins.size() == static_cast<std::size_t>(p - 3));
  }
}

TEST_CASE("filled graph agrees with the elimination game") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int p = 4 + static_cast<int>(seed % 20);
    const Graph g = oracle::random_graph(p, 0.15 + 0.01 * (seed % 10), seed);
    const VertexOrdering sigma =
        seed % 2 ? rcm_ordering(g) : VertexOrdering::identity(p);
    const FilledGraph fg = filled_graph(apply_ordering(g, sigma));
    CAPTURE(seed);

    CHECK(edge_set(fg.filled) == oracle::elimination_game(fg.base.relabeled()));
    CHECK(is_perfect_elimination(fg.as_ordered()));
    CHECK(fg.filled.edge_count() ==
          fg.base.relabeled().edge_count() + fg.fillins.size());
    for (const auto& e : fg.base.relabeled().edges()) {
      CHECK(fg.filled.has_edge(e.u, e.v));
    }
    CHECK(std::is_sorted(fg.fillins.begin(), fg.fillins.end()));
    for (const auto& f : fg.fillins) {
      CHECK(f.u > f.v);
      CHECK(!fg.base.relabeled().has_edge(f.u, f.v));
      CHECK(fg.is_fillin(f.u, f.v));
    }
    const auto counts = fg.row_counts();
    for (int i = 0; i < p; ++i) {
      CHECK(counts[i] == static_cast<int>(fg.row[i].size()));
    }
  }
}

TEST_CASE("grid fill counts") {
  // Counts are those of the elimination game under the same ordering. One
  // fill-in per square is not reachable by any ordering: even the 2x2-square
  // grid needs 5 > ab = 4 (exhaustive over all 9! orderings).
  const std::vector<std::pair<int, int>> sizes{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3},
                                               {3, 4}, {4, 2}, {4, 3}, {4, 4}};
  const std::vector<std::size_t> observed{7, 13, 19, 11, 22, 34, 15, 31, 50};
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const auto [a, b] = sizes[k];
    const Graph g = gen_named_graph(GridGraph{a, b});
    CHECK(g.size() == (a + 1) * (b + 1));
    CHECK(g.edge_count() == static_cast<std::size_t>(2 * a * b + a + b));
    const FilledGraph fg = rcm_filled(g);
    CAPTURE(a);
    CAPTURE(b);
    CHECK(edge_set(fg.filled) == oracle::elimination_game(fg.base.relabeled()));
    CHECK(fg.fillins.size() == observed[k]);
  }
}

TEST_CASE("grid minimum fill exceeds one diagonal per square") {
  const Graph g = gen_named_graph(GridGraph{2, 2});
  CHECK(oracle::min_fill(g) == 5);
}

TEST_CASE("is_perfect_elimination") {
  CHECK_FALSE(is_perfect_elimination(
      apply_ordering(cycle(4), VertexOrdering::identity(4))));
  const Graph k5 = Graph::complete(5);
  CHECK(is_perfect_elimination(apply_ordering(k5, VertexOrdering({3, 1, 4, 0, 2}))));

  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const Graph g = oracle::random_graph(8, 0.45, seed);
    const auto og = apply_ordering(g, rcm_ordering(g));
    CHECK(is_perfect_elimination(og) ==
          oracle::perfect_elimination_by_triples(og.relabeled()));
  }

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = oracle::random_chordal(15, seed);
    CHECK(is_perfect_elimination(apply_ordering(inst.graph, inst.peo)));
  }
}

TEST_CASE("maximal_cliques") {
  const auto c4 = maximal_cliques(cycle(4));
  CHECK(c4.size() == 4);
  for (const auto& c : c4) CHECK(c.size() == 2);

  const auto k4 = maximal_cliques(Graph::complete(4));
  REQUIRE(k4.size() == 1);
  CHECK(k4[0] == std::vector<int>{0, 1, 2, 3});

  CHECK(maximal_cliques(gen_named_graph(Multipartite3Graph{2})).size() == 9);
  CHECK(maximal_cliques(gen_named_graph(Multipartite3Graph{3})).size() == 27);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int p = 1 + static_cast<int>(seed % 8);
    const Graph g = oracle::random_graph(p, 0.5, seed);
    CHECK(maximal_cliques(g) == oracle::brute_cliques(g));
  }

  CHECK_THROWS_AS(maximal_cliques(gen_named_graph(Multipartite3Graph{4}), 80),
                  ResourceError);
}

TEST_CASE("connected_components") {
  const auto singletons = connected_components(Graph(3));
  CHECK(singletons == std::vector<std::vector<int>>{{0}, {1}, {2}});

  CHECK(connected_components(cycle(4)).size() == 1);

  Graph g(6);
  for (int v = 0; v < 4; ++v) g.add_edge(v, (v + 1) % 4);
  g.add_edge(4, 5);
  CHECK(connected_components(g) ==
        std::vector<std::vector<int>>{{0, 1, 2, 3}, {4, 5}});
}

TEST_CASE("s_cca on the 8-cycle") {
  const SccaReport r = s_cca_diagnostics(rcm_filled(cycle(8)), 1.0);
  CHECK(r.c == 5);
  REQUIRE(r.dependencies.size() == 5);
  CHECK(r.dependencies[0].empty());
  for (int k = 1; k < 5; ++k) CHECK(r.dependencies[k] == std::vector<int>{k - 1});
  const std::vector<double> g{6, 24, 78, 240, 726};
  const std::vector<double> unshifted{6, 18, 54, 162, 486};
  for (int k = 0; k < 5; ++k) {
    CHECK(r.g_values[k] == doctest::Approx(g[k]));
    CHECK(r.g_values_unshifted[k] == doctest::Approx(unshifted[k]));
  }
  CHECK(r.a_tilde_D <= r.a_D);
  CHECK(r.s_cca == doctest::Approx(std::min<double>(static_cast<double>(r.a_D), 8.0 + 5.0 + 1.0) *
                                   r.a_tilde_D * 727.0 * 727.0));
}

TEST_CASE("s_cca for a chordal graph with a perfect ordering") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = oracle::random_chordal(12, seed);
    const FilledGraph fg = filled_graph(apply_ordering(inst.graph, inst.peo));
    const SccaReport r = s_cca_diagnostics(fg, 0.5);
    CHECK(r.c == 0);
    CHECK(r.s_cca == std::min<double>(static_cast<double>(r.a_D),
                                      fg.filled.edge_count() + 1.0));
  }
  CHECK_THROWS_AS(s_cca_diagnostics(rcm_filled(cycle(5)), 0.0), InputError);
}

TEST_CASE("s_cca dependencies match the set definition") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const int p = 5 + static_cast<int>(seed % 8);
    const Graph g = oracle::random_graph(p, 0.3, seed + 1000);
    const VertexOrdering sigma =
        seed % 3 ? rcm_ordering(g) : VertexOrdering::identity(p);
    const FilledGraph fg = filled_graph(apply_ordering(g, sigma));
    const double delta = 0.5 + 0.25 * (seed % 4);
    const SccaReport r = s_cca_diagnostics(fg, delta);
    const auto deps = oracle::brute_dependencies(fg);
    CAPTURE(seed);
    REQUIRE(r.dependencies.size() == deps.size());
    CHECK(r.c == fg.fillins.size());
    std::vector<double> gv;
    for (std::size_t k = 0; k < deps.size(); ++k) {
      auto mine = r.dependencies[k];
      std::sort(mine.begin(), mine.end());
      CHECK(mine == deps[k]);
      double sum = 0;
      for (int t : deps[k]) sum += gv[t];
      gv.push_back(k == 0 ? 6 / delta : 3 / delta * (2 + sum));
      CHECK(r.g_values[k] == doctest::Approx(gv[k]).epsilon(1e-12));
      CHECK(r.g_values[k] > 0);
    }
    CHECK(r.a_tilde_D <= r.a_D);
  }
}

TEST_CASE("a_D and a_tilde_D by direct counting") {
  const FilledGraph fg = rcm_filled(cycle(8));
  const int p = fg.size();
  long long max_col = 0, max_row = 0, max_fcol = 0, max_frow = 0;
  for (int j = 0; j < p; ++j) {
    long long col = 1, row = 1, fcol = 0, frow = 0;
    for (int i = 0; i < p; ++i) {
      if (i > j && fg.filled.has_edge(i, j)) ++col;
      if (i < j && fg.filled.has_edge(i, j)) ++row;
      if (i > j && fg.is_fillin(i, j)) ++fcol;
      if (i < j && fg.is_fillin(j, i)) ++frow;
    }
    max_col = std::max(max_col, col);
    max_row = std::max(max_row, row);
    max_fcol = std::max(max_fcol, fcol);
    max_frow = std::max(max_frow, frow);
  }
  const SccaReport r = s_cca_diagnostics(fg, 1.0);
  CHECK(r.a_D == max_col * max_row);
  CHECK(r.a_tilde_D == max_fcol * max_frow);
}

TEST_CASE("complexity_estimate") {
  const ComplexityReport empty =
      complexity_estimate(filled_graph(apply_ordering(Graph(5), VertexOrdering::identity(5))));
  CHECK(empty.sum_n_cubed == 0);
  CHECK(empty.path == Step1Path::column);

  for (int p : {4, 10}) {
    const ComplexityReport k = complexity_estimate(
        filled_graph(apply_ordering(Graph::complete(p), VertexOrdering::identity(p))));
    CHECK(k.path == Step1Path::column);
    CHECK(k.filled_edges == static_cast<std::size_t>(p * (p - 1) / 2));
  }
  // 190 > 20^(5/3) ~ 147.4
  CHECK(complexity_estimate(filled_graph(apply_ordering(Graph::complete(20),
                                                        VertexOrdering::identity(20))))
            .path == Step1Path::dense);

  const FilledGraph fg = rcm_filled(cycle(9));
  const ComplexityReport r = complexity_estimate(fg);
  double cubes = 0;
  for (const auto& b : fg.below) cubes += std::pow(static_cast<double>(b.size()), 3);
  CHECK(r.sum_n_cubed == cubes);
  CHECK(r.p_times_fillins == 9.0 * fg.fillins.size());
  CHECK(r.p_cubed == 729.0);
}

TEST_CASE("named graph families") {
  const Graph grid = gen_named_graph(GridGraph{3, 3});
  CHECK(grid.size() == 16);
  CHECK(grid.edge_count() == 24);

  const Graph c8 = gen_named_graph(CycleGraph{8});
  CHECK(c8.edge_count() == 8);
  for (int v = 0; v < 8; ++v) CHECK(c8.degree(v) == 2);

  const Graph ac = gen_named_graph(AlmostCompleteGraph{6});
  CHECK(ac.edge_count() == 13);
  const std::vector<int> tail{2, 3, 4, 5};
  const Graph induced = ac.induced(tail);
  CHECK(induced.edge_count() == 4);
  for (int v = 0; v < 4; ++v) CHECK(induced.degree(v) == 2);

  const Graph bip = gen_named_graph(BipartiteGraph{2, 6});
  CHECK(bip.edge_count() == 8);
  CHECK(bip.has_edge(0, 5));
  CHECK_FALSE(bip.has_edge(4, 5));

  CHECK(gen_named_graph(Multipartite3Graph{2}).edge_count() == 9);

  CHECK_THROWS_AS(gen_named_graph(CycleGraph{2}), InputError);
  CHECK_THROWS_AS(gen_named_graph(GridGraph{0, 3}), InputError);
  CHECK_THROWS_AS(gen_named_graph(BipartiteGraph{4, 6}), InputError);
  CHECK_THROWS_AS(parse_named_graph("star:5"), InputError);
  CHECK(gen_named_graph(parse_named_graph("grid:2x3")).size() == 12);
}
