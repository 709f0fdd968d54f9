#include "cellrobust/rank_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "cellrobust/robust_scale.hpp"

namespace cellrobust {

namespace {

constexpr double kPi = 3.14159265358979323846;

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

bool has_ties(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

void check_pair(std::span<const double> x, std::span<const double> y, std::size_t min_n,
                const char* name) {
  if (x.size() != y.size())
    throw LengthMismatchError(std::string(name) + ": input lengths differ");
  if (x.empty()) throw EmptyInputError(std::string(name) + ": empty input");
  if (x.size() < min_n)
    throw InsufficientDataError(std::string(name) + ": needs at least " +
                                std::to_string(min_n) + " observations");
}

// Merge sort counting the inversions of `values`; destroys the input order.
std::int64_t count_inversions(std::vector<double>& values, std::vector<double>& scratch,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo <= 1) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t count = count_inversions(values, scratch, lo, mid) +
                       count_inversions(values, scratch, mid, hi);
  std::size_t a = lo;
  std::size_t b = mid;
  for (std::size_t k = lo; k < hi; ++k) {
    if (a < mid && (b >= hi || values[a] <= values[b])) {
      scratch[k] = values[a++];
    } else {
      scratch[k] = values[b++];
      count += static_cast<std::int64_t>(mid - a);
    }
  }
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

}  // namespace

CorrelationValue kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2, "kendall_tau");
  const std::size_t n = x.size();
  const std::int64_t total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const bool ties = has_ties(x) || has_ties(y);

  std::int64_t sum = 0;
  if (!ties) {
    // Discordant pairs are exactly the y-inversions in x-sorted order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> y_sorted(n);
    for (std::size_t k = 0; k < n; ++k) y_sorted[k] = y[order[k]];
    std::vector<double> scratch(n);
    const std::int64_t discordant = count_inversions(y_sorted, scratch, 0, n);
    sum = total - 2 * discordant;
  } else {
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = k + 1; l < n; ++l)
        sum += sign_of(x[k] - x[l]) * sign_of(y[k] - y[l]);
  }

  return {static_cast<double>(sum) / static_cast<double>(total), CorrelationKind::KendallTau,
          n, ties};
}

std::vector<double> midranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;  // average of 1-based ranks
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

CorrelationValue spearman_rho(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2, "spearman_rho");
  const std::size_t n = x.size();
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  const double center = 0.5 * static_cast<double>(n + 1);

  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = rx[k] - center;
    const double dy = ry[k] - center;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInputError("spearman_rho: constant rank vector");

  return {sxy / std::sqrt(sxx * syy), CorrelationKind::SpearmanRho, n,
          has_ties(x) || has_ties(y)};
}

CorrelationValue quadrant_corr(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 1, "quadrant_corr");
  const std::size_t n = x.size();
  const double mx = sample_median(x);
  const double my = sample_median(y);
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < n; ++k) sum += sign_of(x[k] - mx) * sign_of(y[k] - my);
  return {static_cast<double>(sum) / static_cast<double>(n), CorrelationKind::Quadrant, n,
          has_ties(x) || has_ties(y)};
}

double sine_transform(const CorrelationValue& c) {
  switch (c.kind) {
    case CorrelationKind::KendallTau:
      return std::sin(kPi * c.value / 2.0);
    case CorrelationKind::SpearmanRho:
      return 2.0 * std::sin(kPi * c.value / 6.0);
    case CorrelationKind::Quadrant:
      break;
  }
  throw UnsupportedKindError("sine_transform: no transform for quadrant correlation");
}

}  // namespace cellrobust
