#include "ridgeboot/io.hpp"

#include "ridgeboot/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace ridgeboot {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, const std::string& source, long line, long column) {
  const std::string_view t = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw DataError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                    ": cannot parse '" + std::string(t) + "' as a finite real");
  }
  return value;
}

}  // namespace

Matrix parse_matrix_csv(std::istream& in, const std::string& source, bool skip_header) {
  std::vector<double> values;
  long cols = -1;
  long rows = 0;
  long line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    long col = 0;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      ++col;
      values.push_back(parse_field(rest.substr(0, comma), source, line_no, col));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols < 0) {
      cols = col;
    } else if (col != cols) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(cols) + " columns, found " + std::to_string(col));
    }
    ++rows;
  }
  if (rows == 0) throw DataError(source + ": no data rows");
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open file");
  return parse_matrix_csv(in, path.string(), skip_header);
}

Vector read_vector_csv(const std::filesystem::path& path, bool skip_header) {
  const Matrix m = read_matrix_csv(path, skip_header);
  if (m.cols() != 1) {
    throw DataError(path.string() + ": expected one value per line, found " +
                    std::to_string(m.cols()) + " columns");
  }
  return m.col(0);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace ridgeboot
