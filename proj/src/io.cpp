#include "cca/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "cca/error.hpp"

namespace cca {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

std::string strip_comment(const std::string& line, char mark) {
  auto pos = line.find(mark);
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_label(const std::string& token, long long& out) {
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string at_line(int lineno) { return "line " + std::to_string(lineno) + ": "; }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

Graph read_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  int p = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(strip_comment(line, '#'));
    std::vector<std::string> fields;
    for (std::string t; tokens >> t;) fields.push_back(t);
    if (fields.empty()) continue;
    if (p < 0) {
      long long count = 0;
      if (fields.size() != 2 || fields[0] != "p" ||
          !parse_label(fields[1], count) || count < 1 || count > 1'000'000) {
        throw InputError(at_line(lineno) + "expected header 'p <count>'");
      }
      p = static_cast<int>(count);
      continue;
    }
    long long i = 0;
    long long j = 0;
    if (fields.size() != 2 || !parse_label(fields[0], i) ||
        !parse_label(fields[1], j)) {
      throw InputError(at_line(lineno) + "expected two integer labels");
    }
    if (i < 1 || i > p || j < 1 || j > p) {
      throw InputError(at_line(lineno) + "label out of range 1.." +
                       std::to_string(p));
    }
    if (i == j) throw InputError(at_line(lineno) + "self-loop");
    edges.push_back(Edge{static_cast<int>(i - 1), static_cast<int>(j - 1)});
  }
  if (p < 0) throw InputError("graph file has no 'p <count>' header");
  return Graph(p, edges);
}

Graph read_graph_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_graph(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "p " << g.size() << '\n';
  for (const Edge& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

VertexOrdering read_ordering(std::istream& in, int p) {
  std::vector<int> seq;
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(strip_comment(line, '#'));
    if (t.empty()) continue;
    long long v = 0;
    if (!parse_label(t, v)) {
      throw InputError(at_line(lineno) + "expected one integer label");
    }
    if (v < 1 || v > p) {
      throw InputError(at_line(lineno) + "label out of range 1.." +
                       std::to_string(p));
    }
    if (seen[v - 1]) {
      throw InputError(at_line(lineno) + "label " + std::to_string(v) +
                       " repeated");
    }
    seen[v - 1] = 1;
    seq.push_back(static_cast<int>(v - 1));
  }
  if (static_cast<int>(seq.size()) != p) {
    throw InputError("ordering lists " + std::to_string(seq.size()) +
                     " labels, expected " + std::to_string(p));
  }
  return VertexOrdering::from_sequence(seq);
}

VertexOrdering read_ordering_file(const std::string& path, int p) {
  auto in = open_input(path);
  try {
    return read_ordering(in, p);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_ordering(std::ostream& out, const VertexOrdering& sigma) {
  for (int v : sigma.sequence()) out << v + 1 << '\n';
}

DataMatrix read_csv(std::istream& in) {
  DataMatrix d;
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size() && numeric; ++k) {
      numeric = parse_double(fields[k], row[k]);
    }
    if (first) {
      first = false;
      width = fields.size();
      if (!numeric) {
        for (auto& f : fields) d.variable_names.push_back(trim(f));
        continue;
      }
    }
    if (fields.size() != width) {
      throw InputError(at_line(lineno) + "expected " + std::to_string(width) +
                       " fields, found " + std::to_string(fields.size()));
    }
    if (!numeric) throw InputError(at_line(lineno) + "non-numeric field");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!std::isfinite(row[k])) {
        throw InputError(at_line(lineno) + "non-finite value in column " +
                         std::to_string(k + 1));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("CSV has no data rows");
  d.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) d.values(r, c) = rows[r][c];
  }
  return d;
}

DataMatrix read_csv_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_csv(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

SymMatrix read_matrix_csv_file(const std::string& path) {
  DataMatrix d = read_csv_file(path);
  if (d.n() != d.p()) {
    throw InputError(path + ": matrix is " + std::to_string(d.n()) + "x" +
                     std::to_string(d.p()) + ", expected square");
  }
  try {
    return SymMatrix(std::move(d.values));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_triplets(std::ostream& out, const SymMatrix& m) {
  const int p = m.dim();
  std::size_t nnz = 0;
  for (int j = 0; j < p; ++j) {
    for (int i = j; i < p; ++i) nnz += m(i, j) != 0.0;
  }
  out << "% symmetric lower triangle, 1-based: i j value\n";
  out << "% " << p << ' ' << p << ' ' << nnz << '\n';
  for (int j = 0; j < p; ++j) {
    for (int i = j; i < p; ++i) {
      if (m(i, j) != 0.0) {
        out << i + 1 << ' ' << j + 1 << ' ' << format_double(m(i, j)) << '\n';
      }
    }
  }
}

}  // namespace cca
