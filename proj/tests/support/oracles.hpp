#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here deliberately avoids the production code paths it verifies:
// the LP oracle enumerates vertex bases, the glasso oracle is a proximal
// gradient loop, the projection oracle is a dense grid search, and the KKT
// oracle recomputes the inverse from scratch.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "cellrobust/linalg.hpp"
#include "cellrobust/matrix.hpp"

namespace oracles {

using cellrobust::Matrix;
using cellrobust::SymMatrix;

inline double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Wilson-Hilferty approximation to the chi-square quantile at the level whose
// standard normal quantile is z; adequate for the large degrees of freedom
// used in the mask-independence tests.
inline double chi_square_quantile(double df, double z) {
  const double h = 2.0 / (9.0 * df);
  const double core = 1.0 - h + z * std::sqrt(h);
  return df * core * core * core;
}

// Stationarity residual of the off-diagonal-penalized glasso, recomputing the
// inverse through the numeric kernel rather than trusting solver state.
inline double glasso_kkt_oracle(const SymMatrix& sigma, const SymMatrix& omega,
                                double lambda) {
  const SymMatrix inverse = cellrobust::inverse_spd(omega);
  double worst = 0.0;
  for (std::size_t i = 0; i < sigma.dim(); ++i) {
    for (std::size_t j = i; j < sigma.dim(); ++j) {
      const double grad = sigma(i, j) - inverse(i, j);
      double violation;
      if (i == j)
        violation = std::abs(grad);
      else if (omega(i, j) != 0.0)
        violation = std::abs(grad + lambda * (omega(i, j) > 0.0 ? 1.0 : -1.0));
      else
        violation = std::max(0.0, std::abs(grad) - lambda);
      worst = std::max(worst, violation);
    }
  }
  return worst;
}

// Monotone proximal-gradient reference for the glasso objective. Slow and
// simple; p <= 4 only.
inline SymMatrix glasso_ista_reference(const SymMatrix& sigma, double lambda,
                                       int iterations = 200000, double tol = 1e-12) {
  const std::size_t p = sigma.dim();
  SymMatrix omega(p);
  for (std::size_t i = 0; i < p; ++i) omega.set(i, i, 1.0 / sigma(i, i));

  auto objective = [&](const SymMatrix& m) {
    double value = cellrobust::trace_product(sigma, m) - cellrobust::logdet_pd(m);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) value += 2.0 * lambda * std::abs(m(i, j));
    return value;
  };

  double step = 0.5;
  double current = objective(omega);
  for (int it = 0; it < iterations; ++it) {
    const SymMatrix inverse = cellrobust::inverse_spd(omega);
    bool moved = false;
    while (step > 1e-14) {
      SymMatrix next(p);
      bool pd = true;
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
          double value = omega(i, j) - step * (sigma(i, j) - inverse(i, j));
          if (i != j) {
            const double cut = step * lambda;
            value = value > cut ? value - cut : (value < -cut ? value + cut : 0.0);
          }
          next.set(i, j, value);
        }
      }
      double next_objective = std::numeric_limits<double>::infinity();
      try {
        next_objective = objective(next);
      } catch (const cellrobust::PositiveDefinitenessError&) {
        pd = false;
      }
      if (pd && next_objective <= current + 1e-15) {
        const double change = cellrobust::linf_distance(next, omega);
        omega = next;
        current = next_objective;
        moved = change > tol;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      if (step > 1e-14) break;  // converged: no descent step left at this scale
      step = 0.5;
    } else {
      step = std::min(step * 2.0, 0.5);
    }
  }
  return omega;
}

// Dense grid search for the 2x2 nearest-PSD problem in elementwise linf
// distance. Returns the optimal distance found on the grid.
inline double linf_projection_grid_oracle_2x2(const SymMatrix& sigma, double span,
                                              int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int ia = 0; ia <= steps; ++ia) {
    const double a = sigma(0, 0) - span + 2.0 * span * ia / steps;
    if (a < 0.0) continue;
    for (int ib = 0; ib <= steps; ++ib) {
      const double b = sigma(1, 1) - span + 2.0 * span * ib / steps;
      if (b < 0.0) continue;
      for (int ic = 0; ic <= steps; ++ic) {
        const double c = sigma(0, 1) - span + 2.0 * span * ic / steps;
        if (c * c > a * b) continue;  // not PSD
        const double dist = std::max({std::abs(a - sigma(0, 0)), std::abs(b - sigma(1, 1)),
                                      std::abs(c - sigma(0, 1))});
        best = std::min(best, dist);
      }
    }
  }
  return best;
}

// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_dense(Matrix a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < 1e-11) return false;
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(col, k), a(pivot, k));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a(r, k) -= f * a(col, k);
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= a(r, k) * x[k];
    x[r] = acc / a(r, r);
  }
  return true;
}

// Brute-force LP oracle: minimize c'x over {A x <= b, x >= 0} by enumerating
// every basis of n active constraints. Returns nullopt when no feasible
// vertex exists. Exponential; keep n small.
inline std::optional<double> lp_vertex_oracle(const Matrix& a, const std::vector<double>& b,
                                              const std::vector<double>& c) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t total = m + n;  // constraint rows plus x_k >= 0 bounds

  std::vector<std::size_t> combo(n);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  std::optional<double> best;

  auto visit = [&]() {
    Matrix system(n, n, 0.0);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t k = combo[r];
      if (k < m) {
        for (std::size_t jcol = 0; jcol < n; ++jcol) system(r, jcol) = a(k, jcol);
        rhs[r] = b[k];
      } else {
        system(r, k - m) = 1.0;  // x_{k-m} = 0
      }
    }
    std::vector<double> x;
    if (!solve_dense(system, rhs, x)) return;
    for (std::size_t jcol = 0; jcol < n; ++jcol)
      if (x[jcol] < -1e-8) return;
    for (std::size_t r = 0; r < m; ++r) {
      double lhs = 0.0;
      for (std::size_t jcol = 0; jcol < n; ++jcol) lhs += a(r, jcol) * x[jcol];
      if (lhs > b[r] + 1e-8) return;
    }
    double obj = 0.0;
    for (std::size_t jcol = 0; jcol < n; ++jcol) obj += c[jcol] * x[jcol];
    if (!best || obj < *best) best = obj;
  };

  // Iterate over all n-subsets of the `total` constraints.
  for (;;) {
    visit();
    std::size_t i = n;
    while (i-- > 0) {
      if (combo[i] < total - (n - i)) {
        ++combo[i];
        for (std::size_t k = i + 1; k < n; ++k) combo[k] = combo[k - 1] + 1;
        break;
      }
      if (i == 0) return best;
    }
  }
}

// Order-3 U-statistic from the Spearman/Kendall decomposition, by direct
// enumeration of all triples and permutations. Distinct values assumed.
inline double spearman_u_statistic(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  double total = 0.0;
  std::size_t triples = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const std::size_t idx[3] = {i, j, k};
        static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                            {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        double kernel = 0.0;
        for (const auto& perm : perms) {
          const std::size_t a = idx[perm[0]];
          const std::size_t bb = idx[perm[1]];
          const std::size_t cc = idx[perm[2]];
          kernel += 3.0 * sgn(x[a] - x[bb]) * sgn(y[a] - y[cc]);
        }
        total += kernel / 6.0;
        ++triples;
      }
    }
  }
  return total / static_cast<double>(triples);
}

}  // namespace oracles
