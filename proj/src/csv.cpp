#include "cellrobust/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace cellrobust {

std::string format_double(double v) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  if (ec != std::errc{}) throw IoError("format_double: conversion failed");
  return std::string(buffer, end);
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{}) throw IoError("cannot parse numeric field '" + field + "'");
  for (const char* q = ptr; q < end; ++q)
    if (*q != ' ' && *q != '\t' && *q != '\r')
      throw IoError("trailing characters in numeric field '" + field + "'");
  return v;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current += ch;
    }
  }
  fields.push_back(current);
  return fields;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

void write_grid(std::ofstream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace

void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  write_grid(out, m);
}

void write_matrix_csv(const std::string& path, const SymMatrix& m) {
  write_matrix_csv(path, m.full());
}

Matrix read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f));
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged rows in '" + path + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix file '" + path + "'");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

SymMatrix read_sym_matrix_csv(const std::string& path, double tol) {
  return SymMatrix::from_matrix(read_matrix_csv(path), tol);
}

void write_data_csv(const std::string& path, const DataMatrix& data) {
  auto out = open_out(path);
  const auto& names = data.column_names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (j) out << ',';
    out << names[j];
  }
  out << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j) out << ',';
      out << format_double(data(i, j));
    }
    out << '\n';
  }
}

DataMatrix read_data_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty data file '" + path + "'");
  const auto names = split_csv_line(line);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != names.size())
      throw IoError("row width differs from header in '" + path + "'");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("data file '" + path + "' has no observations");

  DataMatrix data(rows.size(), names.size());
  data.set_column_names(names);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j) data(i, j) = rows[i][j];
  return data;
}

void write_mask_csv(const std::string& path, const DataMatrix& data) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j) out << ',';
      out << (data.masked(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

}  // namespace cellrobust
