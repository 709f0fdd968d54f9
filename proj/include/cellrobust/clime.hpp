#pragma once

#include <cstddef>
#include <vector>

#include "cellrobust/covariance.hpp"
#include "cellrobust/glasso.hpp"
#include "cellrobust/matrix.hpp"
#include "cellrobust/simplex.hpp"

namespace cellrobust {

struct ColumnLp {
  SymMatrix sigma;
  std::size_t target_index = 0;
  double lambda = 0.0;
};

struct ColumnSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> beta;
  double objective = 0.0;       // l1 norm of beta at the optimum
  double duality_gap = 0.0;
  double phase1_objective = 0.0;
};

// One CLIME column: minimize ||beta||_1 subject to
// ||sigma beta - e_j||_inf <= lambda, as a dense two-phase simplex on the
// split beta = u - v. Infeasibility (phase-1 optimum above 1e-9) is a
// legitimate outcome, not an error.
ColumnSolution clime_column(const ColumnLp& lp);

// Post-symmetrization: each unordered pair keeps whichever of the
// two entries has smaller magnitude; equal magnitudes keep the (i, j) entry
// with i < j.
SymMatrix symmetrize_smaller_magnitude(const Matrix& omega1);

// Full CLIME estimate: p independent column programs assembled columnwise and
// then symmetrized. If any column is infeasible the whole estimate carries
// status Infeasible with the failing columns listed. threads > 1 solves
// columns concurrently.
PrecisionEstimate clime(const CovarianceEstimate& sigma, double lambda,
                        unsigned threads = 1);

PrecisionEstimate clime(const SymMatrix& sigma, double lambda, unsigned threads = 1);

}  // namespace cellrobust
