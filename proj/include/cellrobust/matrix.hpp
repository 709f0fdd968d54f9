#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "cellrobust/errors.hpp"

namespace cellrobust {

// Dense row-major matrix of doubles. The workhorse container for factor
// matrices, eigenvector bases, and the CLIME column assembly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Symmetric p x p matrix. Symmetry is exact by construction: set() writes the
// mirrored cell, and there is no non-symmetric mutation path.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim, double fill = 0.0) : m_(dim, dim, fill) {
    if (dim == 0) throw DomainError("SymMatrix dimension must be at least 1");
  }

  // Rows of a full square matrix; throws unless the input is symmetric to
  // within `tol` (entries are exactly mirrored from the lower triangle).
  static SymMatrix from_matrix(const Matrix& full, double tol = 0.0);

  static SymMatrix identity(std::size_t n) {
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
  }

  static SymMatrix diagonal(const std::vector<double>& d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
  }

  // Row-major initializer for small literals in tests and demos.
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const noexcept { return m_.rows(); }

  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  void set(std::size_t i, std::size_t j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  void add(std::size_t i, std::size_t j, double v) { set(i, j, m_(i, j) + v); }

  const Matrix& full() const noexcept { return m_; }

  bool operator==(const SymMatrix& other) const = default;

 private:
  Matrix m_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<double> multiply(const SymMatrix& a, const std::vector<double>& x);

SymMatrix add_scaled_identity(const SymMatrix& a, double shift);

// max_ij |a_ij - b_ij|
double linf_distance(const SymMatrix& a, const SymMatrix& b);
double linf_distance(const Matrix& a, const Matrix& b);

// sum_ij a_ij b_ij, which equals tr(a b) for symmetric a, b.
double trace_product(const SymMatrix& a, const SymMatrix& b);

}  // namespace cellrobust
