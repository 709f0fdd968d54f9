#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cellrobust/clime.hpp"
#include "cellrobust/covariance.hpp"
#include "cellrobust/glasso.hpp"

namespace cellrobust {

// Which covariance estimate feeds the precision solver.
struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Kendall;
  ScaleKind scale = ScaleKind::Mad;
  // GKQn is paired with the Frobenius PSD projection when used here.
};

CovarianceEstimate estimate_covariance(const DataMatrix& data, const EstimatorConfig& config,
                                       unsigned threads = 1);

struct CvPlan {
  std::size_t folds = 5;
  std::size_t grid_size = 15;
  double lambda_min_ratio = 0.01;
  std::uint64_t seed = 0;
};

struct CvCurve {
  std::vector<double> lambdas;                   // descending, endpoints inclusive
  std::vector<double> mean_scores;               // +inf where any fold failed
  std::vector<std::vector<double>> fold_scores;  // [grid][fold]
  std::vector<std::vector<std::string>> fold_status;
  double lambda_star = 0.0;
  std::size_t lambda_star_index = 0;
};

// Log-spaced grid from lambda_max down to lambda_min_ratio * lambda_max.
std::vector<double> lambda_grid(double lambda_max, std::size_t grid_size,
                                double lambda_min_ratio);

// Seeded fold assignment: a uniform random permutation cut into K contiguous
// blocks whose sizes differ by at most one. Returns fold index per row.
std::vector<std::size_t> assign_folds(std::size_t n, std::size_t folds, std::uint64_t seed);

// K-fold cross-validation of the penalty: for each grid point and fold, fit
// the chosen solver on the training folds and score the held-out fold by
//   -log det(omega) + tr(sigma_test omega)
// with sigma_test the robust covariance of the test fold. Failed fits score
// +inf. The winner is the smallest mean score, ties broken toward larger
// lambda. Throws AllInfeasibleError when every grid point fails on some fold.
CvCurve cv_select(const DataMatrix& data, const EstimatorConfig& estimator,
                  SolverKind solver, const CvPlan& plan, unsigned threads = 1,
                  const GlassoOptions& glasso_options = {});

}  // namespace cellrobust
