#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cellrobust/data.hpp"
#include "cellrobust/matrix.hpp"

namespace cellrobust {

// Shortest round-trip decimal representation (std::to_chars); parsing the
// result with parse_double recovers the exact bits.
std::string format_double(double v);
double parse_double(const std::string& field);

std::string format_optional(const std::optional<double>& v);  // empty cell for null

// Matrices: full row-major grid, no header.
void write_matrix_csv(const std::string& path, const Matrix& m);
void write_matrix_csv(const std::string& path, const SymMatrix& m);
Matrix read_matrix_csv(const std::string& path);
SymMatrix read_sym_matrix_csv(const std::string& path, double tol = 0.0);

// Data matrices: header row of column names, then one row per observation.
void write_data_csv(const std::string& path, const DataMatrix& data);
DataMatrix read_data_csv(const std::string& path);

// 0/1 grid parallel to the data matrix.
void write_mask_csv(const std::string& path, const DataMatrix& data);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace cellrobust
