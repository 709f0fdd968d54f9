#include "cellrobust/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cellrobust/linalg.hpp"

namespace cellrobust {

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double offdiag_l1(const SymMatrix& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i + 1; j < m.dim(); ++j) acc += std::abs(m(i, j));
  return 2.0 * acc;
}

double objective_value(const SymMatrix& sigma, const SymMatrix& omega, double lambda,
                       const Matrix& chol_lower) {
  double logdet = 0.0;
  for (std::size_t i = 0; i < omega.dim(); ++i) logdet += std::log(chol_lower(i, i));
  logdet *= 2.0;
  return trace_product(sigma, omega) - logdet + lambda * offdiag_l1(omega);
}

SymMatrix inverse_from_cholesky(const Matrix& lower) {
  const std::size_t p = lower.rows();
  SymMatrix inv(p);
  std::vector<double> e(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    e[j] = 1.0;
    const std::vector<double> col = solve_spd(lower, e);
    e[j] = 0.0;
    for (std::size_t i = j; i < p; ++i) inv.set(i, j, col[i]);
  }
  return inv;
}

}  // namespace

std::string solver_name(SolverKind kind) {
  return kind == SolverKind::GLasso ? "glasso" : "clime";
}

std::string solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

double glasso_kkt_residual(const SymMatrix& sigma, const SymMatrix& omega,
                           const SymMatrix& omega_inverse, double lambda) {
  const std::size_t p = sigma.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      const double grad = sigma(i, j) - omega_inverse(i, j);
      double violation;
      if (i == j) {
        violation = std::abs(grad);
      } else if (omega(i, j) != 0.0) {
        violation = std::abs(grad + lambda * (omega(i, j) > 0.0 ? 1.0 : -1.0));
      } else {
        violation = std::max(0.0, std::abs(grad) - lambda);
      }
      worst = std::max(worst, violation);
    }
  }
  return worst;
}

PrecisionEstimate glasso(const SymMatrix& sigma, double lambda, const GlassoOptions& options) {
  const std::size_t p = sigma.dim();
  if (lambda < 0.0) throw DomainError("glasso: lambda must be nonnegative");
  if (!(options.tol > 0.0)) throw DomainError("glasso: tol must be positive");
  for (std::size_t i = 0; i < p; ++i)
    if (!(sigma(i, i) > 0.0))
      throw NonPositiveDiagonalError("glasso: covariance diagonal entry " +
                                     std::to_string(i) + " is not strictly positive");

  PrecisionEstimate result;
  result.lambda = lambda;
  result.solver = SolverKind::GLasso;

  // Start from the diagonal fit: always PD and scale-adapted.
  SymMatrix omega(p);
  for (std::size_t i = 0; i < p; ++i) omega.set(i, i, 1.0 / sigma(i, i));

  // The objective is bounded below only when some dual shift with zero
  // diagonal and off-diagonal entries within lambda makes sigma PSD. A shift
  // of that kind moves the smallest eigenvalue by at most lambda (p - 1), so
  // inputs failing that margin are certainly unbounded.
  bool sigma_pd = true;
  try {
    cholesky(sigma);
  } catch (const PositiveDefinitenessError&) {
    sigma_pd = false;
  }
  if (!sigma_pd) {
    const double lam_min = min_eigenvalue(sigma);
    if (lam_min + lambda * static_cast<double>(p - 1) < 0.0) {
      result.matrix = omega;
      result.status = SolveStatus::Diverged;
      result.diagnostics.diverged = true;
      result.diagnostics.message =
          "objective is unbounded below for this indefinite covariance - apply "
          "linf_psd_projection first";
      return result;
    }
  }

  Matrix lower = cholesky(omega);
  SymMatrix w = inverse_from_cholesky(lower);
  double objective = objective_value(sigma, omega, lambda, lower);
  double initial_scale = 1.0;
  for (std::size_t i = 0; i < p; ++i) initial_scale = std::max(initial_scale, omega(i, i));

  SolverDiagnostics diag;
  diag.objective_trace.push_back(objective);

  int consecutive_failures = 0;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    const double kkt = glasso_kkt_residual(sigma, omega, w, lambda);
    if (kkt <= options.tol) {
      diag.converged = true;
      diag.kkt_residual = kkt;
      break;
    }

    // Free set: current nonzeros plus coordinates whose gradient escapes the
    // penalty. Diagonal coordinates are always free.
    std::vector<std::pair<std::size_t, std::size_t>> free_set;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i; j < p; ++j) {
        if (i == j || omega(i, j) != 0.0 ||
            std::abs(sigma(i, j) - w(i, j)) > lambda) {
          free_set.emplace_back(i, j);
        }
      }
    }

    // Coordinate descent on the quadratic model of the smooth part. The
    // sweep budget grows with the outer iteration so the direction quality
    // keeps up on ill-conditioned problems; sweeps that stop moving the
    // direction end early.
    SymMatrix direction(p, 0.0);
    Matrix dw(p, p, 0.0);  // direction * w
    const int sweeps = std::min(1 + iter / 3, 200);
    double direction_scale = 0.0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      double sweep_change = 0.0;
      for (const auto& [i, j] : free_set) {
        const double a = (i == j) ? w(i, i) * w(i, i)
                                  : w(i, j) * w(i, j) + w(i, i) * w(j, j);
        double wu = 0.0;
        for (std::size_t k = 0; k < p; ++k) wu += w(i, k) * dw(k, j);
        const double b = sigma(i, j) - w(i, j) + wu;
        double mu;
        if (i == j) {
          mu = -b / a;
        } else {
          const double c = omega(i, j) + direction(i, j);
          mu = -c + soft_threshold(c - b / a, lambda / a);
        }
        if (mu == 0.0) continue;
        direction.add(i, j, mu);
        sweep_change = std::max(sweep_change, std::abs(mu));
        direction_scale = std::max(direction_scale, std::abs(direction(i, j)));
        for (std::size_t k = 0; k < p; ++k) dw(i, k) += mu * w(j, k);
        if (i != j)
          for (std::size_t k = 0; k < p; ++k) dw(j, k) += mu * w(i, k);
      }
      if (sweep_change <= 1e-3 * direction_scale) break;
    }

    // Predicted decrease for the Armijo test.
    double descent = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      descent += (sigma(i, i) - w(i, i)) * direction(i, i);
      for (std::size_t j = i + 1; j < p; ++j) {
        descent += 2.0 * (sigma(i, j) - w(i, j)) * direction(i, j);
        descent += 2.0 * lambda *
                   (std::abs(omega(i, j) + direction(i, j)) - std::abs(omega(i, j)));
      }
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      SymMatrix candidate(p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j)
          candidate.set(i, j, omega(i, j) + alpha * direction(i, j));
      Matrix candidate_lower;
      try {
        candidate_lower = cholesky(candidate);
      } catch (const PositiveDefinitenessError&) {
        continue;  // stepped outside the PD cone
      }
      const double candidate_objective =
          objective_value(sigma, candidate, lambda, candidate_lower);
      if (candidate_objective <= objective + 1e-4 * alpha * descent) {
        omega = std::move(candidate);
        lower = std::move(candidate_lower);
        w = inverse_from_cholesky(lower);
        objective = candidate_objective;
        accepted = true;
        break;
      }
    }

    if (accepted) {
      consecutive_failures = 0;
      diag.objective_trace.push_back(objective);
      double omega_linf = 0.0;
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j)
          omega_linf = std::max(omega_linf, std::abs(omega(i, j)));
      if (objective < options.objective_floor || omega_linf > 1e8 * initial_scale) {
        diag.diverged = true;
        diag.message =
            "iterates are escaping to infinity; the input covariance is likely "
            "indefinite - apply linf_psd_projection first";
        break;
      }
    } else if (++consecutive_failures >= 10) {
      diag.diverged = true;
      diag.message =
          "10 consecutive line-search failures; the input covariance is likely "
          "indefinite - apply linf_psd_projection first";
      break;
    }
  }

  diag.iterations = iter;
  diag.objective = objective;
  if (!diag.converged) diag.kkt_residual = glasso_kkt_residual(sigma, omega, w, lambda);

  result.matrix = omega;
  result.diagnostics = diag;
  if (diag.converged)
    result.status = SolveStatus::Converged;
  else if (diag.diverged)
    result.status = SolveStatus::Diverged;
  else
    result.status = SolveStatus::IterationLimit;
  if (result.status == SolveStatus::IterationLimit)
    result.diagnostics.message = "iteration limit reached; best iterate returned";
  return result;
}

PrecisionEstimate glasso(const CovarianceEstimate& sigma, double lambda,
                         const GlassoOptions& options) {
  return glasso(sigma.matrix, lambda, options);
}

SupportSet support(const PrecisionEstimate& estimate, double threshold) {
  const SymMatrix& omega = estimate.matrix;
  double linf = 0.0;
  for (std::size_t i = 0; i < omega.dim(); ++i)
    for (std::size_t j = 0; j < omega.dim(); ++j) linf = std::max(linf, std::abs(omega(i, j)));
  const double cutoff = threshold * std::max(1.0, linf);

  SupportSet edges;
  for (std::size_t i = 0; i < omega.dim(); ++i)
    for (std::size_t j = i + 1; j < omega.dim(); ++j)
      if (std::abs(omega(i, j)) > cutoff) edges.edges.insert({i, j});
  return edges;
}

}  // namespace cellrobust
