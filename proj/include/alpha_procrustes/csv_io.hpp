#pragma once

// Plain comma-separated numeric files. Every parse failure throws
// Error(ParseError) naming the file and line.

#include <iosfwd>
#include <string>

#include "alpha_procrustes/linalg_core.hpp"

namespace alpha_procrustes::csv {

/// Rectangular numeric table. Blank lines are skipped; with skip_header the
/// first non-blank line is dropped.
Matrix read_table(std::istream& in, const std::string& source, bool skip_header = false);
Matrix read_table_file(const std::string& path, bool skip_header = false);

/// Square matrix, symmetric to 1e-8 absolute, then exactly symmetrized.
SymMatrix read_symmetric_file(const std::string& path);

/// One value per line, or a single row.
Vector read_vector_file(const std::string& path);

/// %.12g, comma separated, one row per line.
void write_matrix(std::ostream& out, const Matrix& m);

/// Shortest form of v at 12 significant digits; "-0" prints as "0".
std::string format_number(double v);

}  // namespace alpha_procrustes::csv
