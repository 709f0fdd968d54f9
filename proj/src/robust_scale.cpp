#include "cellrobust/robust_scale.hpp"

#include <algorithm>
#include <cmath>

namespace cellrobust {

namespace {

constexpr double kQnConsistency = 2.21914;

double kth_smallest(std::vector<double>& scratch, std::size_t k) {
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                   scratch.end());
  return scratch[k];
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double std_normal_quantile(double c) {
  if (!(c > 0.0 && c < 1.0))
    throw DomainError("std_normal_quantile: argument must lie strictly in (0, 1)");

  // Bracket the root, expanding for extreme tail probabilities.
  double lo = -8.0;
  double hi = 8.0;
  while (std_normal_cdf(lo) > c) lo *= 2.0;
  while (std_normal_cdf(hi) < c) hi *= 2.0;

  double x = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = std_normal_cdf(x) - c;
    if (std::abs(f) <= 1e-15) break;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
    double step = density > 0.0 ? f / density : 0.0;
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // Newton left the bracket
    if (next == x) break;
    x = next;
  }
  return x;
}

double mad_consistency_factor() {
  static const double factor = 1.0 / std_normal_quantile(0.75);
  return factor;
}

double sample_median(std::span<const double> x) {
  if (x.empty()) throw EmptyInputError("sample_median: empty input");
  std::vector<double> scratch(x.begin(), x.end());
  const std::size_t k_star = (scratch.size() + 1) / 2;  // ceil(n/2), 1-based
  return kth_smallest(scratch, k_star - 1);
}

ScaleEstimate mad(std::span<const double> x) {
  if (x.empty()) throw EmptyInputError("mad: empty input");
  const double center = sample_median(x);
  std::vector<double> deviations(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) deviations[i] = std::abs(x[i] - center);
  const std::size_t k_star = (deviations.size() + 1) / 2;
  const double raw = kth_smallest(deviations, k_star - 1);
  return {raw * mad_consistency_factor(), raw, ScaleKind::Mad};
}

ScaleEstimate qn(std::span<const double> x) {
  if (x.empty()) throw EmptyInputError("qn: empty input");
  if (x.size() < 2) throw InsufficientDataError("qn: needs at least 2 observations");
  const std::size_t n = x.size();
  std::vector<double> diffs;
  diffs.reserve(n * (n - 1) / 2);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l) diffs.push_back(std::abs(x[k] - x[l]));
  const std::size_t pairs = diffs.size();
  const std::size_t k_star = (pairs + 3) / 4;  // ceil(pairs/4), 1-based
  const double raw = kth_smallest(diffs, k_star - 1);
  return {raw * kQnConsistency, raw, ScaleKind::Qn};
}

ScaleEstimate scale_estimate(std::span<const double> x, ScaleKind kind) {
  return kind == ScaleKind::Mad ? mad(x) : qn(x);
}

}  // namespace cellrobust
