#include "cellrobust/clime.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "cellrobust/parallel.hpp"

namespace cellrobust {

ColumnSolution clime_column(const ColumnLp& lp) {
  if (lp.lambda < 0.0) throw DomainError("clime_column: lambda must be nonnegative");
  const std::size_t p = lp.sigma.dim();
  if (lp.target_index >= p) throw DomainError("clime_column: target index out of range");

  // Variables x = (u, v) with beta = u - v, u, v >= 0. Constraints:
  //   sigma (u - v) <= e_j + lambda
  //  -sigma (u - v) <= -e_j + lambda
  Matrix a(2 * p, 2 * p);
  std::vector<double> b(2 * p);
  std::vector<double> c(2 * p, 1.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < p; ++k) {
      a(i, k) = lp.sigma(i, k);
      a(i, p + k) = -lp.sigma(i, k);
      a(p + i, k) = -lp.sigma(i, k);
      a(p + i, p + k) = lp.sigma(i, k);
    }
    const double target = (i == lp.target_index) ? 1.0 : 0.0;
    b[i] = target + lp.lambda;
    b[p + i] = -target + lp.lambda;
  }

  const LpResult lpres = simplex_solve(a, b, c, 1e-9);
  ColumnSolution out;
  out.status = lpres.status;
  out.phase1_objective = lpres.phase1_objective;
  if (lpres.status == LpStatus::Infeasible) return out;

  out.objective = lpres.objective;
  out.duality_gap = lpres.duality_gap;
  out.beta.resize(p);
  for (std::size_t k = 0; k < p; ++k) out.beta[k] = lpres.x[k] - lpres.x[p + k];
  return out;
}

SymMatrix symmetrize_smaller_magnitude(const Matrix& omega1) {
  if (omega1.rows() != omega1.cols())
    throw DimensionMismatchError("symmetrize: square matrix required");
  const std::size_t p = omega1.rows();
  SymMatrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    out.set(i, i, omega1(i, i));
    for (std::size_t j = i + 1; j < p; ++j) {
      const double upper = omega1(i, j);
      const double lower = omega1(j, i);
      out.set(i, j, std::abs(upper) <= std::abs(lower) ? upper : lower);
    }
  }
  return out;
}

PrecisionEstimate clime(const SymMatrix& sigma, double lambda, unsigned threads) {
  if (lambda < 0.0) throw DomainError("clime: lambda must be nonnegative");
  const std::size_t p = sigma.dim();

  Matrix omega1(p, p, 0.0);
  std::vector<std::size_t> infeasible;
  std::mutex merge_mutex;
  double worst_gap = 0.0;

  parallel_for(p, threads, [&](std::size_t j) {
    const ColumnSolution sol = clime_column({sigma, j, lambda});
    if (sol.status == LpStatus::Infeasible) {
      std::lock_guard<std::mutex> lock(merge_mutex);
      infeasible.push_back(j);
      return;
    }
    for (std::size_t i = 0; i < p; ++i) omega1(i, j) = sol.beta[i];
    std::lock_guard<std::mutex> lock(merge_mutex);
    worst_gap = std::max(worst_gap, sol.duality_gap);
  });

  PrecisionEstimate result;
  result.lambda = lambda;
  result.solver = SolverKind::Clime;
  result.diagnostics.kkt_residual = worst_gap;

  if (!infeasible.empty()) {
    std::sort(infeasible.begin(), infeasible.end());
    result.status = SolveStatus::Infeasible;
    result.infeasible_columns = std::move(infeasible);
    std::string cols;
    for (std::size_t j : result.infeasible_columns)
      cols += (cols.empty() ? "" : ", ") + std::to_string(j);
    result.diagnostics.message = "infeasible columns: " + cols;
    return result;
  }

  result.column_solution = omega1;
  result.matrix = symmetrize_smaller_magnitude(omega1);
  result.status = SolveStatus::Converged;
  result.diagnostics.converged = true;
  return result;
}

PrecisionEstimate clime(const CovarianceEstimate& sigma, double lambda, unsigned threads) {
  return clime(sigma.matrix, lambda, threads);
}

}  // namespace cellrobust
