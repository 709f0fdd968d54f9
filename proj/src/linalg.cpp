#include "cellrobust/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cellrobust {

Matrix cholesky(const SymMatrix& m) {
  const std::size_t p = m.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));
  const double pivot_floor = 1e-12 * max_diag;

  Matrix lower(p, p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > pivot_floor))
      throw PositiveDefinitenessError(
          j, "matrix is not numerically positive definite (pivot " + std::to_string(diag) +
                 " at index " + std::to_string(j) + ")");
    const double ljj = std::sqrt(diag);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double acc = m(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= lower(i, k) * lower(j, k);
      lower(i, j) = acc / ljj;
    }
  }
  return lower;
}

namespace {

// One Givens rotation in the (i, j) plane applied as J^T A J, zeroing a_ij.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t i, std::size_t j) {
  const std::size_t p = a.rows();
  const double apq = a(i, j);
  if (apq == 0.0) return;
  const double tau = (a(j, j) - a(i, i)) / (2.0 * apq);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  for (std::size_t k = 0; k < p; ++k) {
    const double aki = a(k, i);
    const double akj = a(k, j);
    a(k, i) = c * aki - s * akj;
    a(k, j) = s * aki + c * akj;
  }
  for (std::size_t k = 0; k < p; ++k) {
    const double aik = a(i, k);
    const double ajk = a(j, k);
    a(i, k) = c * aik - s * ajk;
    a(j, k) = s * aik + c * ajk;
  }
  a(i, j) = 0.0;
  a(j, i) = 0.0;

  for (std::size_t k = 0; k < p; ++k) {
    const double vki = v(k, i);
    const double vkj = v(k, j);
    v(k, i) = c * vki - s * vkj;
    v(k, j) = s * vki + c * vkj;
  }
}

double max_offdiag(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j)));
  return worst;
}

}  // namespace

EigenSym sym_eigen(const SymMatrix& m, int max_sweeps) {
  const std::size_t p = m.dim();
  if (max_sweeps < 0) max_sweeps = static_cast<int>(100 * p);

  Matrix a = m.full();
  Matrix v = Matrix::identity(p);

  double scale = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) scale = std::max(scale, std::abs(a(i, j)));
  const double tol = (scale == 0.0) ? 0.0 : 1e-13 * scale;

  int sweep = 0;
  while (max_offdiag(a) > tol) {
    if (sweep++ >= max_sweeps)
      throw IterationLimitError("Jacobi eigendecomposition did not converge in " +
                                std::to_string(max_sweeps) + " sweeps");
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        if (std::abs(a(i, j)) > tol * 1e-2) jacobi_rotate(a, v, i, j);
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenSym out;
  out.values.resize(p);
  out.vectors = Matrix(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < p; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

double min_eigenvalue(const SymMatrix& m) { return sym_eigen(m).values.back(); }

double logdet_pd(const SymMatrix& m) {
  const Matrix lower = cholesky(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) acc += std::log(lower(i, i));
  return 2.0 * acc;
}

std::vector<double> solve_spd(const Matrix& chol_lower, const std::vector<double>& rhs) {
  const std::size_t p = chol_lower.rows();
  if (rhs.size() != p) throw DimensionMismatchError("solve_spd: rhs length differs");
  std::vector<double> y(p);
  for (std::size_t i = 0; i < p; ++i) {
    double acc = rhs[i];
    for (std::size_t k = 0; k < i; ++k) acc -= chol_lower(i, k) * y[k];
    y[i] = acc / chol_lower(i, i);
  }
  std::vector<double> x(p);
  for (std::size_t ii = p; ii-- > 0;) {
    double acc = y[ii];
    for (std::size_t k = ii + 1; k < p; ++k) acc -= chol_lower(k, ii) * x[k];
    x[ii] = acc / chol_lower(ii, ii);
  }
  return x;
}

SymMatrix inverse_spd(const SymMatrix& m) {
  const std::size_t p = m.dim();
  const Matrix lower = cholesky(m);
  SymMatrix inv(p);
  std::vector<double> e(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = solve_spd(lower, e);
    e[j] = 0.0;
    // Mirror from the computed column; roundoff asymmetry stays below the
    // factorization error and the lower triangle wins.
    for (std::size_t i = j; i < p; ++i) inv.set(i, j, col[i]);
  }
  return inv;
}

MatrixNormReport norms(const SymMatrix& m) {
  const std::size_t p = m.dim();
  MatrixNormReport report;
  double frob2 = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double colsum = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double a = std::abs(m(i, j));
      report.linf = std::max(report.linf, a);
      colsum += a;
      frob2 += a * a;
    }
    report.l1_operator = std::max(report.l1_operator, colsum);
  }
  report.frob = std::sqrt(frob2);
  const EigenSym eig = sym_eigen(m);
  for (double lam : eig.values) report.spectral = std::max(report.spectral, std::abs(lam));
  return report;
}

}  // namespace cellrobust
