#include "cellrobust/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cellrobust/linalg.hpp"
#include "cellrobust/parallel.hpp"
#include "cellrobust/rng.hpp"

namespace cellrobust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DataMatrix select_rows(const DataMatrix& data, const std::vector<std::size_t>& rows) {
  DataMatrix out(rows.size(), data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i) out(i, j) = data(rows[i], j);
  out.set_column_names(data.column_names());
  return out;
}

// Held-out negative log-likelihood; +inf when omega is not numerically PD
// (e.g. an over-penalized CLIME estimate), recorded like any other failure.
double heldout_score(const SymMatrix& sigma_test, const SymMatrix& omega) {
  try {
    return -logdet_pd(omega) + trace_product(sigma_test, omega);
  } catch (const PositiveDefinitenessError&) {
    return kInf;
  }
}

}  // namespace

CovarianceEstimate estimate_covariance(const DataMatrix& data, const EstimatorConfig& config,
                                       unsigned threads) {
  switch (config.kind) {
    case EstimatorKind::SampleCov:
      return sample_cov(data);
    case EstimatorKind::GKQn:
      return frobenius_psd_projection(gk_cov(data, config.scale, threads));
    default:
      return robust_cov(data, config.kind, config.scale, threads);
  }
}

std::vector<double> lambda_grid(double lambda_max, std::size_t grid_size,
                                double lambda_min_ratio) {
  if (!(lambda_max > 0.0)) throw DomainError("lambda_grid: lambda_max must be positive");
  if (grid_size < 2) throw DomainError("lambda_grid: need at least 2 grid points");
  if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0))
    throw DomainError("lambda_grid: ratio must lie in (0, 1)");

  std::vector<double> grid(grid_size);
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(lambda_max * lambda_min_ratio);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    grid[k] = std::exp(log_max + frac * (log_min - log_max));
  }
  grid.front() = lambda_max;
  grid.back() = lambda_max * lambda_min_ratio;
  return grid;
}

std::vector<std::size_t> assign_folds(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw DomainError("assign_folds: need at least 2 folds");
  if (n < 2 * folds)
    throw InsufficientDataError("assign_folds: need at least 2 rows per fold");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t j = rng.uniform_int(i + 1);
    std::swap(perm[i], perm[j]);
  }

  // Contiguous blocks of the permutation; the first n % folds blocks get the
  // extra row.
  std::vector<std::size_t> fold_of(n);
  const std::size_t base = n / folds;
  const std::size_t extra = n % folds;
  std::size_t cursor = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t k = 0; k < size; ++k) fold_of[perm[cursor++]] = f;
  }
  return fold_of;
}

CvCurve cv_select(const DataMatrix& data, const EstimatorConfig& estimator,
                  SolverKind solver, const CvPlan& plan, unsigned threads,
                  const GlassoOptions& glasso_options) {
  const std::size_t n = data.rows();
  const std::vector<std::size_t> fold_of = assign_folds(n, plan.folds, plan.seed);

  const CovarianceEstimate full = estimate_covariance(data, estimator, threads);
  double lambda_max = 0.0;
  for (std::size_t i = 0; i < full.matrix.dim(); ++i)
    for (std::size_t j = i + 1; j < full.matrix.dim(); ++j)
      lambda_max = std::max(lambda_max, std::abs(full.matrix(i, j)));
  if (lambda_max <= 0.0)
    throw DegenerateInputError("cv_select: every off-diagonal covariance entry is zero");

  CvCurve curve;
  curve.lambdas = lambda_grid(lambda_max, plan.grid_size, plan.lambda_min_ratio);
  curve.fold_scores.assign(curve.lambdas.size(),
                           std::vector<double>(plan.folds, kInf));
  curve.fold_status.assign(curve.lambdas.size(),
                           std::vector<std::string>(plan.folds, "ok"));

  // Per-fold covariances are shared across the lambda grid.
  std::vector<CovarianceEstimate> train_cov(plan.folds);
  std::vector<CovarianceEstimate> test_cov(plan.folds);
  parallel_for(plan.folds, threads, [&](std::size_t f) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < n; ++i)
      (fold_of[i] == f ? test_rows : train_rows).push_back(i);
    train_cov[f] = estimate_covariance(select_rows(data, train_rows), estimator, 1);
    test_cov[f] = estimate_covariance(select_rows(data, test_rows), estimator, 1);
  });

  const std::size_t tasks = curve.lambdas.size() * plan.folds;
  parallel_for(tasks, threads, [&](std::size_t task) {
    const std::size_t g = task / plan.folds;
    const std::size_t f = task % plan.folds;
    const double lambda = curve.lambdas[g];
    try {
      PrecisionEstimate fit = (solver == SolverKind::GLasso)
                                  ? glasso(train_cov[f], lambda, glasso_options)
                                  : clime(train_cov[f], lambda, 1);
      if (fit.status == SolveStatus::Converged ||
          fit.status == SolveStatus::IterationLimit) {
        curve.fold_scores[g][f] = heldout_score(test_cov[f].matrix, fit.matrix);
        if (fit.status == SolveStatus::IterationLimit)
          curve.fold_status[g][f] = solve_status_name(fit.status);
        else if (std::isinf(curve.fold_scores[g][f]))
          curve.fold_status[g][f] = "not_positive_definite";
      } else {
        curve.fold_status[g][f] = solve_status_name(fit.status);
      }
    } catch (const Error& e) {
      curve.fold_status[g][f] = e.kind();
    }
  });

  curve.mean_scores.resize(curve.lambdas.size());
  for (std::size_t g = 0; g < curve.lambdas.size(); ++g) {
    double acc = 0.0;
    for (double s : curve.fold_scores[g]) acc += s;
    curve.mean_scores[g] = acc / static_cast<double>(plan.folds);
  }

  // Grid is descending, so keeping strict improvement ties toward larger
  // lambda (the sparser model).
  std::size_t best = curve.lambdas.size();
  for (std::size_t g = 0; g < curve.lambdas.size(); ++g) {
    if (std::isinf(curve.mean_scores[g])) continue;
    if (best == curve.lambdas.size() || curve.mean_scores[g] < curve.mean_scores[best])
      best = g;
  }
  if (best == curve.lambdas.size())
    throw AllInfeasibleError("cv_select: every grid point failed on some fold");

  curve.lambda_star_index = best;
  curve.lambda_star = curve.lambdas[best];
  return curve;
}

}  // namespace cellrobust
