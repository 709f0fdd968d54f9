#include "cellrobust/matrix.hpp"

#include <cmath>
#include <string>

namespace cellrobust {

SymMatrix SymMatrix::from_matrix(const Matrix& full, double tol) {
  if (full.rows() != full.cols())
    throw DimensionMismatchError("from_matrix requires a square matrix");
  SymMatrix s(full.rows());
  for (std::size_t i = 0; i < full.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (std::abs(full(i, j) - full(j, i)) > tol)
        throw DomainError("matrix is not symmetric at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      s.set(i, j, full(i, j));
    }
  }
  return s;
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t p = rows.size();
  Matrix full(p, p);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != p) throw DimensionMismatchError("ragged row in from_rows");
    std::size_t j = 0;
    for (double v : row) full(i, j++) = v;
    ++i;
  }
  return from_matrix(full, 0.0);
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatchError("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> multiply(const SymMatrix& a, const std::vector<double>& x) {
  if (a.dim() != x.size()) throw DimensionMismatchError("multiply: vector length differs");
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

SymMatrix add_scaled_identity(const SymMatrix& a, double shift) {
  SymMatrix out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) out.set(i, i, a(i, i) + shift);
  return out;
}

double linf_distance(const SymMatrix& a, const SymMatrix& b) {
  return linf_distance(a.full(), b.full());
}

double linf_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatchError("linf_distance: shapes differ");
  double worst = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t k = 0; k < a.rows() * a.cols(); ++k)
    worst = std::max(worst, std::abs(pa[k] - pb[k]));
  return worst;
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchError("trace_product: dimensions differ");
  double acc = 0.0;
  const double* pa = a.full().data();
  const double* pb = b.full().data();
  for (std::size_t k = 0; k < a.dim() * a.dim(); ++k) acc += pa[k] * pb[k];
  return acc;
}

}  // namespace cellrobust
