#pragma once

#include <span>
#include <vector>

#include "cellrobust/errors.hpp"

namespace cellrobust {

enum class ScaleKind { Mad, Qn };

struct ScaleEstimate {
  double value = 0.0;  // consistency-rescaled scale, same units as the data
  double raw = 0.0;    // order statistic before rescaling
  ScaleKind kind = ScaleKind::Mad;
};

// Standard normal CDF, Phi(x) = erfc(-x / sqrt(2)) / 2.
double std_normal_cdf(double x);

// Inverse CDF by safeguarded Newton on the erfc-based CDF;
// |Phi(result) - c| <= 1e-10. Throws DomainError outside (0, 1).
double std_normal_quantile(double c);

// 1 / Phi^{-1}(0.75), computed once by quantile inversion at startup.
double mad_consistency_factor();

// Single order statistic at k* = ceil(n/2): the lower-middle value for even
// n, not the midpoint average.
double sample_median(std::span<const double> x);

// Median absolute deviation from the median; value = raw / Phi^{-1}(0.75).
ScaleEstimate mad(std::span<const double> x);

// k*-th smallest pairwise absolute difference with k* = ceil(C(n,2)/4),
// rescaled by the normal consistency constant 2.21914. Naive O(n^2)
// enumeration. Requires n >= 2.
ScaleEstimate qn(std::span<const double> x);

ScaleEstimate scale_estimate(std::span<const double> x, ScaleKind kind);

}  // namespace cellrobust
