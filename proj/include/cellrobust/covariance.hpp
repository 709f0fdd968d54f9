#pragma once

#include <optional>
#include <string>

#include "cellrobust/data.hpp"
#include "cellrobust/matrix.hpp"
#include "cellrobust/robust_scale.hpp"

namespace cellrobust {

enum class EstimatorKind { SampleCov, Kendall, Spearman, SpearmanU, GKQn };
enum class ProjectionKind { None, LinfPSD, FrobeniusPSD };

std::string estimator_name(EstimatorKind kind);

struct CovarianceEstimate {
  SymMatrix matrix;
  EstimatorKind estimator = EstimatorKind::SampleCov;
  ProjectionKind projection = ProjectionKind::None;
  std::optional<double> min_eigenvalue;  // filled in by the projections
  bool ties = false;                     // any tied values seen during assembly
};

struct ProjectionReport {
  double distance = 0.0;    // linf distance moved
  int bisection_steps = 0;
  bool certified = true;    // false when a Dykstra probe hit its iteration cap
};

// Unbiased sample covariance with 1/(n-1) normalization.
CovarianceEstimate sample_cov(const DataMatrix& data);

// Pairwise rank-correlation covariance: entry (i,j) = s_i s_j T(r_ij) with
// marginal scales s from MAD or Qn and T the sine transform (Kendall,
// Spearman) or the identity (SpearmanU). Diagonal entries are s_i^2.
// Constant columns raise DegenerateColumnError. threads > 1 evaluates
// column pairs concurrently.
CovarianceEstimate robust_cov(const DataMatrix& data, EstimatorKind kind,
                              ScaleKind scale = ScaleKind::Mad, unsigned threads = 1);

// Gnanadesikan-Kettenring pairwise covariance from scale estimates of sums
// and differences: entry (i,j) = (s_+^2 - s_-^2) / 4, diagonal s_i^2. The
// result is generally indefinite; combine with frobenius_psd_projection.
CovarianceEstimate gk_cov(const DataMatrix& data, ScaleKind scale = ScaleKind::Qn,
                          unsigned threads = 1);

// Nearest PSD matrix in elementwise linf distance, computed by bisection on
// the ball radius with Dykstra alternating projections deciding feasibility.
// tol is relative to the input's linf norm.
CovarianceEstimate linf_psd_projection(const CovarianceEstimate& input, double tol = 1e-6,
                                       ProjectionReport* report = nullptr);

// Eigenvalue clipping: the exact Frobenius-norm PSD projection.
CovarianceEstimate frobenius_psd_projection(const CovarianceEstimate& input);

}  // namespace cellrobust
