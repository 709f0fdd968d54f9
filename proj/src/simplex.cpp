#include "cellrobust/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cellrobust {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;

struct Tableau {
  std::size_t rows;
  std::size_t cols;  // variable columns, excluding RHS
  Matrix t;          // rows x (cols + 1), RHS last
  std::vector<double> z;  // reduced-cost row, z[cols] = -objective
  std::vector<std::size_t> basis;
  std::vector<bool> dead_row;

  double& rhs(std::size_t r) { return t(r, cols); }
  double rhs(std::size_t r) const { return t(r, cols); }

  void pivot(std::size_t r, std::size_t e) {
    const double piv = t(r, e);
    for (std::size_t j = 0; j <= cols; ++j) t(r, j) /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const double factor = t(i, e);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) t(i, j) -= factor * t(r, j);
    }
    const double zfactor = z[e];
    if (zfactor != 0.0)
      for (std::size_t j = 0; j <= cols; ++j) z[j] -= zfactor * t(r, j);
    basis[r] = e;
  }

  // Bland's rule: smallest eligible entering column, smallest-index basic
  // variable among tied leaving rows. Returns false at optimality.
  bool step(const std::vector<bool>& enterable) {
    std::size_t entering = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (enterable[j] && z[j] < -kCostTol) {
        entering = j;
        break;
      }
    }
    if (entering == cols) return false;

    std::size_t leaving = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      if (dead_row[i] || t(i, entering) <= kPivotTol) continue;
      const double ratio = rhs(i) / t(i, entering);
      if (ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 &&
           (leaving == rows || basis[i] < basis[leaving]))) {
        best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving == rows)
      throw Error("Unbounded", "simplex: unbounded direction encountered");
    pivot(leaving, entering);
    return true;
  }
};

}  // namespace

LpResult simplex_solve(const Matrix& a, const std::vector<double>& b,
                       const std::vector<double>& c, double feasibility_tol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m || c.size() != n)
    throw DimensionMismatchError("simplex_solve: inconsistent problem shapes");

  std::vector<bool> negated(m, false);
  std::vector<std::size_t> artificial_of_row(m, SIZE_MAX);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      negated[i] = true;
      artificial_of_row[i] = n_art++;
    }
  }

  Tableau tab;
  tab.rows = m;
  tab.cols = n + m + n_art;
  tab.t = Matrix(m, tab.cols + 1, 0.0);
  tab.z.assign(tab.cols + 1, 0.0);
  tab.basis.assign(m, 0);
  tab.dead_row.assign(m, false);

  for (std::size_t i = 0; i < m; ++i) {
    const double sign = negated[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.t(i, j) = sign * a(i, j);
    tab.t(i, n + i) = sign;        // slack
    tab.rhs(i) = sign * b[i];
    if (negated[i]) {
      const std::size_t art_col = n + m + artificial_of_row[i];
      tab.t(i, art_col) = 1.0;
      tab.basis[i] = art_col;
    } else {
      tab.basis[i] = n + i;
    }
  }

  const std::size_t max_pivots = 50000 * (m + 1);
  std::size_t pivots = 0;
  auto run = [&](const std::vector<bool>& enterable) {
    while (tab.step(enterable)) {
      if (++pivots > max_pivots)
        throw IterationLimitError("simplex: pivot limit exceeded");
    }
  };

  LpResult result;

  if (n_art > 0) {
    // Phase 1: minimize the sum of artificials.
    std::fill(tab.z.begin(), tab.z.end(), 0.0);
    for (std::size_t k = 0; k < n_art; ++k) tab.z[n + m + k] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] >= n + m) {
        for (std::size_t j = 0; j <= tab.cols; ++j) tab.z[j] -= tab.t(i, j);
      }
    }
    std::vector<bool> enterable(tab.cols, true);
    run(enterable);

    result.phase1_objective = -tab.z[tab.cols];
    if (result.phase1_objective > feasibility_tol) {
      result.status = LpStatus::Infeasible;
      return result;
    }

    // Remove artificials from the basis; rows that cannot pivot are redundant.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis[i] < n + m) continue;
      std::size_t col = tab.cols;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col == tab.cols) {
        tab.dead_row[i] = true;
      } else {
        tab.pivot(i, col);
      }
    }
  }

  // Phase 2 with the true objective; artificial columns never enter.
  std::fill(tab.z.begin(), tab.z.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) tab.z[j] = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.dead_row[i]) continue;
    const std::size_t bi = tab.basis[i];
    if (bi < n && c[bi] != 0.0) {
      for (std::size_t j = 0; j <= tab.cols; ++j) tab.z[j] -= c[bi] * tab.t(i, j);
    }
  }
  std::vector<bool> enterable(tab.cols, false);
  for (std::size_t j = 0; j < n + m; ++j) enterable[j] = true;
  run(enterable);

  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!tab.dead_row[i] && tab.basis[i] < n) result.x[tab.basis[i]] = tab.rhs(i);
  }
  result.objective = -tab.z[tab.cols];

  // Dual objective from the slack reduced costs; at an optimal basis the gap
  // is roundoff only.
  double dual_objective = 0.0;
  for (std::size_t i = 0; i < m; ++i) dual_objective += -tab.z[n + i] * b[i];
  result.duality_gap = std::abs(result.objective - dual_objective);
  return result;
}

}  // namespace cellrobust
