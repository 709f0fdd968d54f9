#pragma once

#include <vector>

#include "cellrobust/matrix.hpp"

namespace cellrobust {

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;
  double objective = 0.0;
  double phase1_objective = 0.0;  // residual infeasibility from phase 1
  double duality_gap = 0.0;       // |c'x - b'y| at the final basis
};

// Minimize c'x subject to A x <= b, x >= 0, by a dense two-phase tableau
// simplex with Bland's rule (no cycling). Infeasibility is declared when the
// phase-1 optimum exceeds feasibility_tol. Unboundedness cannot occur for
// objectives bounded below on the feasible set; it is reported as a hard
// error if encountered.
LpResult simplex_solve(const Matrix& a, const std::vector<double>& b,
                       const std::vector<double>& c, double feasibility_tol = 1e-9);

}  // namespace cellrobust
