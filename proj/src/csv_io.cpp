#include "alpha_procrustes/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace alpha_procrustes::csv {

namespace {

constexpr double kSymmetryTol = 1e-8;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, const std::string& source, int line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::ParseError, fmt::format("{}:{}: '{}' is not a number", source, line, cell));
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::ParseError, fmt::format("{}:{}: non-finite value", source, line));
  }
  return value;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}'", path));
  return in;
}

}  // namespace

Matrix read_table(std::istream& in, const std::string& source, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::string text;
  int line = 0;
  bool header_pending = skip_header;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view = trim(text);
    if (view.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    while (true) {
      const size_t comma = view.find(',');
      row.push_back(parse_cell(view.substr(0, comma), source, line));
      if (comma == std::string_view::npos) break;
      view.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError, fmt::format("{}:{}: expected {} columns, found {}", source, line,
                                                     rows.front().size(), row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, fmt::format("{}: no data", source));
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

Matrix read_table_file(const std::string& path, bool skip_header) {
  std::ifstream in = open(path);
  return read_table(in, path, skip_header);
}

SymMatrix read_symmetric_file(const std::string& path) {
  const Matrix m = read_table_file(path);
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: matrix is {}x{}, not square", path, m.rows(), m.cols()));
  }
  if (!is_symmetric_within(m, kSymmetryTol)) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: matrix is not symmetric within {}", path, kSymmetryTol));
  }
  return SymMatrix(m);
}

Vector read_vector_file(const std::string& path) {
  const Matrix m = read_table_file(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw Error(ErrorCode::ParseError, fmt::format("{}: expected a single row or column", path));
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.12g}", v);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace alpha_procrustes::csv
