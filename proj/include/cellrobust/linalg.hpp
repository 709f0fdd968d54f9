#pragma once

#include <vector>

#include "cellrobust/matrix.hpp"

namespace cellrobust {

struct MatrixNormReport {
  double linf = 0.0;         // elementwise max magnitude
  double frob = 0.0;         // Frobenius norm
  double spectral = 0.0;     // max |eigenvalue|
  double l1_operator = 0.0;  // max column absolute sum
};

struct EigenSym {
  std::vector<double> values;  // sorted descending
  Matrix vectors;              // eigenvectors as columns, matching `values`
};

// Lower Cholesky factor L with L L^T = m. Throws PositiveDefinitenessError
// (carrying the pivot index) when a pivot falls at or below
// 1e-12 * max diagonal entry.
Matrix cholesky(const SymMatrix& m);

// Cyclic Jacobi sweeps. max_sweeps < 0 selects the default cap of 100 * dim;
// exceeding the cap raises IterationLimitError.
EigenSym sym_eigen(const SymMatrix& m, int max_sweeps = -1);

double min_eigenvalue(const SymMatrix& m);

// 2 * sum log L_ii from the Cholesky factor; propagates
// PositiveDefinitenessError for inputs that are not numerically PD.
double logdet_pd(const SymMatrix& m);

// Inverse of a symmetric positive definite matrix via its Cholesky factor.
SymMatrix inverse_spd(const SymMatrix& m);

// Solve m x = rhs for SPD m (two triangular solves against the factor).
std::vector<double> solve_spd(const Matrix& chol_lower, const std::vector<double>& rhs);

MatrixNormReport norms(const SymMatrix& m);

}  // namespace cellrobust
