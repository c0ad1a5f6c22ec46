// cca: command-line front end.
//
// Exit codes: 0 success, 2 input or resource error, 3 numerical failure.
// Primary artifacts go to --out; the report (timings included) goes to
// stdout as key=value text or JSON.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cca/baselines.hpp"
#include "cca/cov.hpp"
#include "cca/error.hpp"
#include "cca/estimate.hpp"
#include "cca/graph.hpp"
#include "cca/io.hpp"
#include "cca/portfolio.hpp"
#include "cca/simgen.hpp"

namespace {

using Json = nlohmann::ordered_json;
using cca::format_double;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

// Flat report: insertion-ordered, rendered as key=value lines or one JSON
// object.
class Report {
 public:
  template <class T>
  void set(const std::string& key, const T& value) {
    json_[key] = value;
  }
  Json& json() { return json_; }

  void print(std::ostream& out, bool as_json) const {
    if (as_json) {
      out << json_.dump(2) << '\n';
      return;
    }
    for (const auto& [key, value] : json_.items()) print_text(out, key, value);
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }
  static void print_text(std::ostream& out, const std::string& key,
                         const Json& v) {
    if (v.is_object()) {
      for (const auto& [k, inner] : v.items()) print_text(out, key + "." + k, inner);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        print_text(out, key + "." + std::to_string(i + 1), v[i]);
      }
    } else if (v.is_array()) {
      out << key << '=';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << (v[i].is_array() ? v[i].dump() : scalar(v[i]));
      }
      out << '\n';
    } else {
      out << key << '=' << scalar(v) << '\n';
    }
  }

  Json json_ = Json::object();
};

struct Common {
  std::string format = "text";
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

struct Inputs {
  std::string data;
  std::string cov;
  bool no_center = false;
  std::string graph;
  std::optional<double> select_threshold;
  std::optional<double> target_sparsity;
  std::string ordering = "rcm";
};

void add_inputs(CLI::App* cmd, Inputs& in) {
  auto* data = cmd->add_option("--data", in.data,
                               "Observations CSV (rows = observations); "
                               "covariance uses divisor n")
                   ->check(CLI::ExistingFile);
  auto* cov = cmd->add_option("--cov", in.cov, "Covariance matrix CSV")
                  ->check(CLI::ExistingFile);
  data->excludes(cov);
  cmd->add_flag("--no-center", in.no_center, "Do not subtract column means");
  auto* graph = cmd->add_option("--graph", in.graph, "Edge-list file")
                    ->check(CLI::ExistingFile);
  auto* tau = cmd->add_option("--select-threshold", in.select_threshold,
                              "Select edges |pinv(S)_ij| > tau")
                  ->check(CLI::NonNegativeNumber);
  auto* frac = cmd->add_option("--target-sparsity", in.target_sparsity,
                               "Select edges by target off-diagonal zero "
                               "fraction in (0,1)");
  graph->excludes(tau)->excludes(frac);
  tau->excludes(frac);
  cmd->add_option("--ordering", in.ordering,
                  "natural, rcm, or a file listing one label per position")
      ->capture_default_str();
}

struct Problem {
  cca::SymMatrix s;
  cca::Graph g;
  std::string graph_source;
};

Problem load_problem(const Inputs& in) {
  if (in.data.empty() == in.cov.empty()) {
    throw cca::InputError("exactly one of --data or --cov is required");
  }
  if (in.graph.empty() && !in.select_threshold && !in.target_sparsity) {
    throw cca::InputError(
        "one of --graph, --select-threshold or --target-sparsity is required");
  }
  Problem pr;
  if (!in.data.empty()) {
    pr.s = cca::sample_covariance(cca::read_csv_file(in.data), !in.no_center);
  } else {
    pr.s = cca::read_matrix_csv_file(in.cov);
  }
  if (!in.graph.empty()) {
    pr.g = cca::read_graph_file(in.graph);
    pr.graph_source = in.graph;
  } else if (in.select_threshold) {
    pr.g = cca::threshold_graph(pr.s, cca::AbsoluteThreshold{*in.select_threshold});
    pr.graph_source = "threshold";
  } else {
    pr.g = cca::threshold_graph(pr.s, cca::SparsityTarget{*in.target_sparsity});
    pr.graph_source = "target-sparsity";
  }
  if (pr.g.size() != pr.s.dim()) {
    throw cca::InputError("graph has " + std::to_string(pr.g.size()) +
                          " vertices but covariance is " +
                          std::to_string(pr.s.dim()) + "x" +
                          std::to_string(pr.s.dim()));
  }
  return pr;
}

cca::OrderingChoice ordering_choice(const std::string& choice, int p) {
  if (choice == "natural") return cca::NaturalOrdering{};
  if (choice == "rcm") return cca::RcmOrdering{};
  return cca::read_ordering_file(choice, p);
}

cca::VertexOrdering resolve_ordering(const std::string& choice,
                                     const cca::Graph& g) {
  if (choice == "natural") return cca::VertexOrdering::identity(g.size());
  if (choice == "rcm") return cca::rcm_ordering(g);
  return cca::read_ordering_file(choice, g.size());
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw cca::InputError("cannot write " + path);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json edge_list_json(const std::vector<cca::Edge>& edges) {
  Json arr = Json::array();
  for (const auto& e : edges) arr.push_back({e.u + 1, e.v + 1});
  return arr;
}

Json timings_json(const cca::PhaseTimes& t) {
  return Json{{"ordering", t.ordering},
              {"fill", t.fill},
              {"step1", t.step1},
              {"step2", t.step2},
              {"total", t.total()}};
}

void write_matrix(const std::string& path, const std::string& layout,
                  const cca::SymMatrix& m) {
  auto out = open_output(path);
  if (layout == "dense") {
    cca::write_dense_csv(out, m.matrix());
  } else {
    cca::write_triplets(out, m);
  }
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  Inputs in;
  std::string path = "auto";
  std::string out;
  std::string layout = "triplets";
};

int run_estimate(const EstimateArgs& a, const Common& c) {
  Problem pr = load_problem(a.in);
  cca::EstimateOptions opts;
  opts.ordering = ordering_choice(a.in.ordering, pr.g.size());
  opts.path = a.path == "column"  ? cca::PathPolicy::column
              : a.path == "dense" ? cca::PathPolicy::dense
                                  : cca::PathPolicy::automatic;
  opts.threads = c.threads;
  cca::EstimateReport rep = cca::cca_estimate(pr.s, pr.g, opts);
  const auto mem = cca::verify_membership(rep.omega_hat, pr.g, 1e-10);
  if (!a.out.empty()) write_matrix(a.out, a.layout, rep.omega_hat);

  Report r;
  r.set("command", "estimate");
  r.set("p", pr.s.dim());
  r.set("edges", pr.g.edge_count());
  r.set("graph", pr.graph_source);
  r.set("ordering", a.in.ordering);
  r.set("components", rep.components);
  r.set("path", rep.path);
  r.set("fillins", rep.fillins);
  r.set("filled_edges", rep.filled_edges);
  r.set("min_eigenvalue", rep.min_eigenvalue);
  r.set("max_nonedge_abs", rep.max_nonedge_abs);
  r.set("membership", mem.pass ? "pass" : "fail");
  if (!a.out.empty()) r.set("output", a.out);
  r.json()["timings"] = timings_json(rep.timings);
  r.print(std::cout, c.format == "json");
  return 0;
}

// ---------------------------------------------------------------------------

struct MleArgs {
  Inputs in;
  std::string method;
  double tol = 1e-8;
  int max_iter = 5000;
  std::string init = "diagonal";
  std::string warm_start;
  std::size_t clique_cap = 100'000;
  std::string out;
  std::string layout = "triplets";
};

int run_mle(const MleArgs& a, const Common& c) {
  if (a.method != "ipf" && a.method != "gipf") {
    throw cca::InputError("unknown method '" + a.method + "' (expected ipf or gipf)");
  }
  if (!a.warm_start.empty() && a.warm_start != "cca") {
    throw cca::InputError("--warm-start accepts only 'cca'");
  }
  Problem pr = load_problem(a.in);
  cca::IterativeConfig cfg;
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.clique_cap = a.clique_cap;
  cfg.init = a.init == "identity" ? cca::IterativeInit{cca::IdentityScaledInit{}}
                                  : cca::IterativeInit{cca::DiagonalInit{}};
  double warm_seconds = 0.0;
  if (a.warm_start == "cca") {
    cca::EstimateOptions opts;
    opts.ordering = ordering_choice(a.in.ordering, pr.g.size());
    opts.threads = c.threads;
    opts.diagnostics = false;
    auto rep = cca::cca_estimate(pr.s, pr.g, opts);
    warm_seconds = rep.timings.total();
    cfg.init = cca::WarmStart{rep.omega_hat};
  }
  const auto t0 = std::chrono::steady_clock::now();
  cca::IterativeResult res = a.method == "ipf" ? cca::ipf_mle(pr.s, pr.g, cfg)
                                               : cca::gipf_mle(pr.s, pr.g, cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!a.out.empty()) write_matrix(a.out, a.layout, res.omega);
  const auto mem = cca::verify_membership(res.omega, pr.g, 1e-8);

  Report r;
  r.set("command", "mle");
  r.set("method", a.method);
  r.set("p", pr.s.dim());
  r.set("edges", pr.g.edge_count());
  r.set("init", a.warm_start == "cca" ? "cca" : a.init);
  r.set("converged", res.converged);
  r.set("iterations", res.iterations);
  r.set("final_delta", res.final_delta);
  r.set("neg_loglik", res.neg_loglik);
  r.set("min_eigenvalue", mem.min_eigenvalue);
  r.set("membership", mem.pass ? "pass" : "fail");
  if (!a.out.empty()) r.set("output", a.out);
  r.json()["timings"] = Json{{"warm_start", warm_seconds}, {"iterate", secs}};
  r.print(std::cout, c.format == "json");
  return 0;
}

// ---------------------------------------------------------------------------

struct GraphArgs {
  std::string graph;
  std::string ordering = "rcm";
  std::string out;
  double delta = 1.0;
};

int run_order(const GraphArgs& a, const Common& c) {
  cca::Graph g = cca::read_graph_file(a.graph);
  cca::VertexOrdering sigma = resolve_ordering(a.ordering, g);
  if (!a.out.empty()) {
    auto out = open_output(a.out);
    cca::write_ordering(out, sigma);
  }
  Report r;
  r.set("command", "order");
  r.set("p", g.size());
  r.set("ordering", a.ordering);
  r.set("bandwidth_before", cca::bandwidth(g));
  r.set("bandwidth_after", cca::bandwidth(cca::apply_ordering(g, sigma).relabeled()));
  Json seq = Json::array();
  for (int v : sigma.sequence()) seq.push_back(v + 1);
  r.set("sequence", seq);
  r.print(std::cout, c.format == "json");
  return 0;
}

int run_fill(const GraphArgs& a, const Common& c) {
  cca::Graph g = cca::read_graph_file(a.graph);
  cca::VertexOrdering sigma = resolve_ordering(a.ordering, g);
  cca::FilledGraph fg = cca::filled_graph(cca::apply_ordering(g, sigma));
  // Report in original labels.
  auto label = [&](const cca::Edge& e) {
    return cca::Edge{sigma.vertex_at(e.u), sigma.vertex_at(e.v)};
  };
  std::vector<cca::Edge> fills;
  for (const auto& e : fg.fillins) fills.push_back(label(e));
  if (!a.out.empty()) {
    cca::Graph filled(g.size());
    for (const auto& e : fg.filled.edges()) {
      const auto l = label(e);
      filled.add_edge(l.u, l.v);
    }
    auto out = open_output(a.out);
    cca::write_graph(out, filled);
  }
  const auto cx = cca::complexity_estimate(fg);
  std::size_t largest = 0;
  for (const auto& b : fg.below) largest = std::max(largest, b.size() + 1);
  Report r;
  r.set("command", "fill");
  r.set("p", g.size());
  r.set("edges", g.edge_count());
  r.set("ordering", a.ordering);
  r.set("fillins", fg.fillins.size());
  r.set("filled_edges", fg.filled.edge_count());
  r.set("largest_clique", largest);
  r.set("chordal", fg.fillins.empty());
  r.set("step1_path", cx.path == cca::Step1Path::column ? "column" : "dense");
  r.set("fillin_list", edge_list_json(fills));
  r.print(std::cout, c.format == "json");
  return 0;
}

int run_scca(const GraphArgs& a, const Common& c) {
  cca::Graph g = cca::read_graph_file(a.graph);
  cca::VertexOrdering sigma = resolve_ordering(a.ordering, g);
  cca::FilledGraph fg = cca::filled_graph(cca::apply_ordering(g, sigma));
  cca::SccaReport s = cca::s_cca_diagnostics(fg, a.delta);
  Report r;
  r.set("command", "scca");
  r.set("p", g.size());
  r.set("ordering", a.ordering);
  r.set("delta", s.delta);
  r.set("a_D", s.a_D);
  r.set("a_tilde_D", s.a_tilde_D);
  r.set("c", s.c);
  r.set("g", s.g_values);
  r.set("g_unshifted", s.g_values_unshifted);
  r.set("s_cca", s.s_cca);
  r.print(std::cout, c.format == "json");
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::string p;
  std::string n;
  std::string dist;
  std::string methods;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<double> nnz_per_p;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::string out;
  std::string summary;
};

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cca::InputError("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw cca::InputError(path + ": line " + std::to_string(lineno) +
                            ": expected key=value");
    }
    auto key = line.substr(0, eq);
    auto value = line.substr(eq + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    static const std::vector<std::string> known{
        "p", "n", "dist", "methods", "reps", "seed", "nnz_per_p", "tol", "max_iter"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw cca::InputError(path + ": line " + std::to_string(lineno) +
                            ": unknown key '" + key + "'");
    }
    kv[key] = value;
  }
  return kv;
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  std::istringstream ss(text);
  T v{};
  if (!(ss >> v) || !(ss >> std::ws).eof()) {
    throw cca::InputError("invalid " + what + ": '" + text + "'");
  }
  return v;
}

int run_bench(const BenchArgs& a, const Common& c) {
  std::map<std::string, std::string> kv;
  if (!a.config.empty()) kv = read_config(a.config);
  auto pick = [&](const std::string& flag, const std::string& key,
                  const std::string& fallback) {
    if (!flag.empty()) return flag;
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  const auto ps = split_list(pick(a.p, "p", "200"));
  const auto ns = split_list(pick(a.n, "n", "100"));
  const auto dists = split_list(pick(a.dist, "dist", "gaussian"));
  const auto methods = split_list(pick(a.methods, "methods", "cca,gipf"));
  const int reps = a.reps ? *a.reps
                          : parse_number<int>(pick("", "reps", "20"), "reps");
  const auto seed = a.seed ? *a.seed
                           : parse_number<std::uint64_t>(pick("", "seed", "1"), "seed");
  const double nnz = a.nnz_per_p
                         ? *a.nnz_per_p
                         : parse_number<double>(pick("", "nnz_per_p", "2"), "nnz_per_p");
  cca::BenchOptions opts;
  opts.tol = a.tol ? *a.tol : parse_number<double>(pick("", "tol", "1e-8"), "tol");
  opts.max_iter = a.max_iter ? *a.max_iter
                             : parse_number<int>(pick("", "max_iter", "5000"), "max_iter");
  opts.threads = c.threads;
  if (!(opts.tol > 0.0)) throw cca::InputError("tol must be positive");
  if (opts.max_iter < 1) throw cca::InputError("max_iter must be at least 1");
  if (ps.empty() || ns.empty() || dists.empty() || methods.empty()) {
    throw cca::InputError("p, n, dist and methods must be non-empty");
  }

  std::vector<cca::BenchMethod> ms;
  for (const auto& m : methods) ms.push_back(cca::parse_bench_method(m));
  std::vector<cca::BenchCell> cells;
  for (const auto& d : dists) {
    const auto dist = cca::parse_distribution(d);
    for (const auto& p : ps) {
      for (const auto& n : ns) {
        cca::BenchCell cell;
        cell.p = parse_number<int>(p, "p");
        cell.n = parse_number<int>(n, "n");
        cell.dist = dist;
        cell.methods = ms;
        cell.reps = reps;
        cell.base_seed = seed;
        cell.nnz_per_p = nnz;
        cells.push_back(cell);
      }
    }
  }
  const auto rows = cca::run_benchmark(cells, opts);
  const auto summary = cca::summarize(rows);

  if (!a.out.empty()) {
    auto out = open_output(a.out);
    out << "method,p,n,seed,time_seconds,rel_frob\n";
    for (const auto& row : rows) {
      out << row.method << ',' << row.p << ',' << row.n << ',' << row.seed << ','
          << format_double(row.time_seconds) << ',' << format_double(row.rel_frob)
          << '\n';
    }
  }
  if (!a.summary.empty()) {
    auto out = open_output(a.summary);
    out << "method,p,n,dist,reps,mean_time_seconds,mean_rel_frob,"
           "mean_iterations,non_converged\n";
    for (const auto& s : summary) {
      out << s.method << ',' << s.p << ',' << s.n << ',' << s.dist << ','
          << s.reps << ',' << format_double(s.mean_time_seconds) << ','
          << format_double(s.mean_rel_frob) << ','
          << format_double(s.mean_iterations) << ',' << s.non_converged << '\n';
    }
  }
  Report r;
  r.set("command", "bench");
  r.set("rows", rows.size());
  Json cells_json = Json::array();
  for (const auto& s : summary) {
    cells_json.push_back(Json{{"method", s.method},
                              {"p", s.p},
                              {"n", s.n},
                              {"dist", s.dist},
                              {"reps", s.reps},
                              {"mean_time_seconds", s.mean_time_seconds},
                              {"mean_rel_frob", s.mean_rel_frob},
                              {"mean_iterations", s.mean_iterations},
                              {"non_converged", s.non_converged}});
  }
  r.set("summary", cells_json);
  r.print(std::cout, c.format == "json");
  return 0;
}

// ---------------------------------------------------------------------------

struct PortfolioArgs {
  std::string returns;
  int nest = 0;
  int hold = 0;
  std::string graph;
  std::optional<double> target_sparsity;
  std::string ordering = "rcm";
  std::string out;
};

int run_portfolio(const PortfolioArgs& a, const Common& c) {
  cca::DataMatrix data = cca::read_csv_file(a.returns);
  cca::PortfolioOptions opts;
  opts.window = a.nest;
  opts.hold = a.hold;
  if (!a.graph.empty()) {
    opts.graph = cca::read_graph_file(a.graph);
  } else {
    opts.target_sparsity = a.target_sparsity.value_or(0.95);
  }
  if (a.ordering == "natural") {
    opts.estimate.ordering = cca::NaturalOrdering{};
  } else if (a.ordering != "rcm") {
    throw cca::InputError("--ordering must be natural or rcm");
  }
  opts.estimate.threads = c.threads;
  opts.estimate.diagnostics = false;
  const auto periods = cca::rolling_min_variance(data, opts);

  if (!a.out.empty()) {
    auto out = open_output(a.out);
    out << "start";
    for (int j = 0; j < data.p(); ++j) {
      out << ',' << (data.variable_names.empty() ? "w" + std::to_string(j + 1)
                                                 : data.variable_names[j]);
    }
    out << '\n';
    for (const auto& per : periods) {
      out << per.start + 1;
      for (int j = 0; j < data.p(); ++j) out << ',' << format_double(per.weights(j));
      out << '\n';
    }
  }
  Report r;
  r.set("command", "portfolio");
  r.set("p", data.p());
  r.set("periods_in_data", data.n());
  r.set("window", a.nest);
  r.set("rebalances", periods.size());
  Json per_json = Json::array();
  double realized = 0.0;
  for (const auto& per : periods) {
    per_json.push_back(Json{{"start", per.start + 1},
                            {"length", per.length},
                            {"edges", per.edges},
                            {"weight_sum", per.weights.sum()},
                            {"in_sample_variance", per.in_sample_variance},
                            {"realized_variance", per.realized_variance},
                            {"mean_return", per.mean_return}});
    realized += per.realized_variance;
  }
  r.set("mean_realized_variance", periods.empty() ? 0.0 : realized / periods.size());
  r.set("period", per_json);
  r.print(std::cout, c.format == "json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained Cholesky estimation of sparse precision matrices"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Two-step CCA estimate");
  add_inputs(c_est, est.in);
  c_est->add_option("--path", est.path, "Step I path")
      ->check(CLI::IsMember({"auto", "column", "dense"}))
      ->capture_default_str();
  c_est->add_option("--out", est.out, "Write the estimate here");
  c_est->add_option("--matrix-format", est.layout, "triplets or dense")
      ->check(CLI::IsMember({"triplets", "dense"}))
      ->capture_default_str();

  MleArgs mle;
  auto* c_mle = app.add_subcommand("mle", "Iterative maximum likelihood");
  add_inputs(c_mle, mle.in);
  c_mle->add_option("--method", mle.method, "ipf or gipf")->required();
  c_mle->add_option("--tol", mle.tol, "Max entry change per sweep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_mle->add_option("--max-iter", mle.max_iter, "Sweep cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_mle->add_option("--init", mle.init, "diagonal or identity")
      ->check(CLI::IsMember({"diagonal", "identity"}))
      ->capture_default_str();
  c_mle->add_option("--warm-start", mle.warm_start, "Start from the CCA estimate (cca)");
  c_mle->add_option("--clique-cap", mle.clique_cap, "IPF maximal clique limit")
      ->capture_default_str();
  c_mle->add_option("--out", mle.out, "Write the estimate here");
  c_mle->add_option("--matrix-format", mle.layout, "triplets or dense")
      ->check(CLI::IsMember({"triplets", "dense"}))
      ->capture_default_str();

  GraphArgs ord;
  auto* c_ord = app.add_subcommand("order", "Vertex ordering");
  c_ord->add_option("--graph", ord.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  c_ord->add_option("--ordering", ord.ordering, "natural, rcm or a file")->capture_default_str();
  c_ord->add_option("--out", ord.out, "Write the ordering here");

  GraphArgs fil;
  auto* c_fil = app.add_subcommand("fill", "Filled graph and fill-in list");
  c_fil->add_option("--graph", fil.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  c_fil->add_option("--ordering", fil.ordering, "natural, rcm or a file")->capture_default_str();
  c_fil->add_option("--out", fil.out, "Write the filled graph here");

  GraphArgs sc;
  auto* c_sc = app.add_subcommand("scca", "Error-propagation diagnostics");
  c_sc->add_option("--graph", sc.graph, "Edge-list file")->required()->check(CLI::ExistingFile);
  c_sc->add_option("--ordering", sc.ordering, "natural, rcm or a file")->capture_default_str();
  c_sc->add_option("--delta", sc.delta, "Lower eigenvalue bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Simulation benchmark");
  c_bench->add_option("--config", bench.config, "key=value file")->check(CLI::ExistingFile);
  c_bench->add_option("--p", bench.p, "Dimensions (comma list)");
  c_bench->add_option("--n", bench.n, "Sample sizes (comma list)");
  c_bench->add_option("--dist", bench.dist, "gaussian or t<df> (comma list)");
  c_bench->add_option("--methods", bench.methods, "cca, ipf, gipf, cca_warm_gipf");
  c_bench->add_option("--reps", bench.reps, "Replications per cell")->check(CLI::PositiveNumber);
  c_bench->add_option("--seed", bench.seed, "Base seed");
  c_bench->add_option("--nnz-per-p", bench.nnz_per_p, "Off-diagonal entries of L per variable")
      ->check(CLI::NonNegativeNumber);
  c_bench->add_option("--tol", bench.tol, "Iterative tolerance")->check(CLI::PositiveNumber);
  c_bench->add_option("--max-iter", bench.max_iter, "Iterative sweep cap")
      ->check(CLI::PositiveNumber);
  c_bench->add_option("--out", bench.out, "Raw rows CSV");
  c_bench->add_option("--summary", bench.summary, "Per-cell means CSV");

  PortfolioArgs pf;
  auto* c_pf = app.add_subcommand("portfolio", "Rolling minimum-variance weights");
  c_pf->add_option("--returns", pf.returns, "Returns CSV (rows = periods)")
      ->required()
      ->check(CLI::ExistingFile);
  c_pf->add_option("--nest", pf.nest, "Estimation window length")->required();
  c_pf->add_option("--hold", pf.hold, "Periods between rebalances (default: window)");
  auto* pf_graph = c_pf->add_option("--graph", pf.graph, "Fixed edge-list file")
                       ->check(CLI::ExistingFile);
  auto* pf_frac = c_pf->add_option("--target-sparsity", pf.target_sparsity,
                                   "Per-window threshold selection (default 0.95)");
  pf_graph->excludes(pf_frac);
  c_pf->add_option("--ordering", pf.ordering, "natural or rcm")->capture_default_str();
  c_pf->add_option("--out", pf.out, "Weights CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*c_est) return run_estimate(est, common);
    if (*c_mle) return run_mle(mle, common);
    if (*c_ord) return run_order(ord, common);
    if (*c_fil) return run_fill(fil, common);
    if (*c_sc) return run_scca(sc, common);
    if (*c_bench) return run_bench(bench, common);
    if (*c_pf) return run_portfolio(pf, common);
  } catch (const cca::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const cca::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitInput;
  } catch (const cca::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}
