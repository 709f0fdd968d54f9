#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cellrobust/covariance.hpp"
#include "cellrobust/matrix.hpp"

namespace cellrobust {

enum class SolverKind { GLasso, Clime };
enum class SolveStatus { Converged, IterationLimit, Diverged, Infeasible };

std::string solver_name(SolverKind kind);
std::string solve_status_name(SolveStatus status);

struct SolverDiagnostics {
  int iterations = 0;
  double kkt_residual = 0.0;
  double objective = 0.0;
  bool converged = false;
  bool diverged = false;
  std::string message;
  std::vector<double> objective_trace;  // one entry per accepted outer iterate
};

struct PrecisionEstimate {
  SymMatrix matrix;
  double lambda = 0.0;
  SolverKind solver = SolverKind::GLasso;
  SolveStatus status = SolveStatus::Converged;
  SolverDiagnostics diagnostics;
  std::optional<Matrix> column_solution;          // CLIME only: pre-symmetrization matrix
  std::vector<std::size_t> infeasible_columns;    // CLIME only
};

struct SupportSet {
  std::set<std::pair<std::size_t, std::size_t>> edges;  // unordered pairs, i < j
};

struct GlassoOptions {
  double tol = 1e-6;
  int max_iter = 500;
  double objective_floor = -1e10;  // below this the solve is declared diverged
};

// Off-diagonal-penalized graphical lasso
//   minimize  tr(sigma omega) - log det omega + lambda * sum_{i != j} |omega_ij|
// over positive definite omega, by a proximal Newton outer loop with an
// l1-penalized coordinate-descent inner loop and an Armijo line search
// restricted to the PD cone (step accepted only when the Cholesky succeeds).
// Indefinite inputs with positive diagonal are accepted; solves that lose
// ground irrecoverably come back with status Diverged rather than throwing.
PrecisionEstimate glasso(const CovarianceEstimate& sigma, double lambda,
                         const GlassoOptions& options = {});

PrecisionEstimate glasso(const SymMatrix& sigma, double lambda,
                         const GlassoOptions& options = {});

// Edges where |omega_ij| exceeds threshold * max(1, linf norm of omega).
SupportSet support(const PrecisionEstimate& estimate, double threshold = 1e-8);

// Max-norm violation of the penalized stationarity condition, using the
// supplied inverse. Exposed so tests can recompute it independently.
double glasso_kkt_residual(const SymMatrix& sigma, const SymMatrix& omega,
                           const SymMatrix& omega_inverse, double lambda);

}  // namespace cellrobust
