#pragma once

#include "ridgeboot/model.hpp"

#include <filesystem>
#include <iosfwd>

namespace ridgeboot {

/// Reads a dense matrix from comma-separated text, one row per line. Blank
/// lines are ignored; `skip_header` drops the first line. Throws DataError
/// naming the file, line and column of the first bad field.
Matrix read_matrix_csv(const std::filesystem::path& path, bool skip_header = false);
Matrix parse_matrix_csv(std::istream& in, const std::string& source, bool skip_header = false);

/// One real per line (a single-column CSV).
Vector read_vector_csv(const std::filesystem::path& path, bool skip_header = false);

void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace ridgeboot
