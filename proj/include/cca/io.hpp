#pragma once

// Text formats. Every label in a file is 1-based.
//
//   edge list:  "p <count>" header, then "i j" per line; '#' starts a comment
//   ordering:   line k holds the label placed at position k
//   data CSV:   rows are observations; an optional non-numeric header row
//   triplets:   "i j value" for the lower triangle, '%' comment header

#include <iosfwd>
#include <string>

#include "cca/cov.hpp"
#include "cca/graph.hpp"

namespace cca {

Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

VertexOrdering read_ordering(std::istream& in, int p);
VertexOrdering read_ordering_file(const std::string& path, int p);
void write_ordering(std::ostream& out, const VertexOrdering& sigma);

/// Header detection: the first row is a header iff any field fails to parse
/// as a number.
DataMatrix read_csv(std::istream& in);
DataMatrix read_csv_file(const std::string& path);

/// Square numeric CSV (header allowed), validated as symmetric.
SymMatrix read_matrix_csv_file(const std::string& path);

/// Shortest round-trip representation of each entry.
void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m);
/// Lower triangle including the diagonal; exact zeros are skipped.
void write_triplets(std::ostream& out, const SymMatrix& m);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

}  // namespace cca
