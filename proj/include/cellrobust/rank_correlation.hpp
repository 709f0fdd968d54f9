#pragma once

#include <span>
#include <vector>

#include "cellrobust/errors.hpp"

namespace cellrobust {

enum class CorrelationKind { KendallTau, SpearmanRho, Quadrant };

struct CorrelationValue {
  double value = 0.0;  // in [-1, 1]
  CorrelationKind kind = CorrelationKind::KendallTau;
  std::size_t n = 0;
  bool ties = false;  // whether tied values were present in either input
};

// Kendall's tau: exact sum of sign products over all C(n,2) pairs with
// sign(0) = 0 and fixed denominator n(n-1)/2 (no tie correction). Tie-free
// inputs take an O(n log n) inversion-count path that produces the same
// integer pair count as the direct enumeration.
CorrelationValue kendall_tau(std::span<const double> x, std::span<const double> y);

// Spearman's rho: Pearson correlation of rank vectors centered at (n+1)/2,
// with mid-ranks assigned to ties. Throws DegenerateInput when either rank
// vector is constant.
CorrelationValue spearman_rho(std::span<const double> x, std::span<const double> y);

// Quadrant correlation: mean sign product of deviations from the columnwise
// medians (order-statistic median convention).
CorrelationValue quadrant_corr(std::span<const double> x, std::span<const double> y);

// Normal-consistency transforms: sin(pi v / 2) for Kendall and
// 2 sin(pi v / 6) for Spearman. Quadrant has no transform here.
double sine_transform(const CorrelationValue& c);

// Mid-ranks (ties get the average of their positions), 1-based.
std::vector<double> midranks(std::span<const double> x);

}  // namespace cellrobust
