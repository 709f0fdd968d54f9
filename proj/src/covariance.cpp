#include "cellrobust/covariance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include "cellrobust/linalg.hpp"
#include "cellrobust/parallel.hpp"
#include "cellrobust/rank_correlation.hpp"

namespace cellrobust {

namespace {

void require_rows(const DataMatrix& data, std::size_t min_rows, const char* name) {
  if (data.rows() < min_rows)
    throw InsufficientDataError(std::string(name) + ": needs at least " +
                                std::to_string(min_rows) + " rows");
  if (data.cols() == 0) throw EmptyInputError(std::string(name) + ": no columns");
}

void reject_constant_columns(const DataMatrix& data) {
  for (std::size_t j = 0; j < data.cols(); ++j) {
    const auto col = data.column(j);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    if (*lo == *hi)
      throw DegenerateColumnError(
          j, "column '" + data.column_names()[j] + "' (index " + std::to_string(j) +
                 ") is constant");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> upper_pairs(std::size_t p) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(p * (p - 1) / 2);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
  return pairs;
}

SymMatrix clip_to_psd(const SymMatrix& m, double* out_min_eig = nullptr) {
  const EigenSym eig = sym_eigen(m);
  if (out_min_eig) *out_min_eig = eig.values.back();
  const std::size_t p = m.dim();
  SymMatrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        const double lam = eig.values[k];
        if (lam <= 0.0) continue;
        acc += lam * eig.vectors(i, k) * eig.vectors(j, k);
      }
      out.set(i, j, acc);
    }
  }
  return out;
}

}  // namespace

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::SampleCov: return "sample";
    case EstimatorKind::Kendall: return "kendall";
    case EstimatorKind::Spearman: return "spearman";
    case EstimatorKind::SpearmanU: return "spearman_u";
    case EstimatorKind::GKQn: return "gk_qn";
  }
  return "unknown";
}

CovarianceEstimate sample_cov(const DataMatrix& data) {
  require_rows(data, 2, "sample_cov");
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();

  std::vector<double> means(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = data.column(j);
    double acc = 0.0;
    for (double v : col) acc += v;
    means[j] = acc / static_cast<double>(n);
  }

  SymMatrix cov(p);
  for (std::size_t i = 0; i < p; ++i) {
    const auto ci = data.column(i);
    for (std::size_t j = i; j < p; ++j) {
      const auto cj = data.column(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += (ci[k] - means[i]) * (cj[k] - means[j]);
      cov.set(i, j, acc / static_cast<double>(n - 1));
    }
  }
  return {cov, EstimatorKind::SampleCov, ProjectionKind::None, std::nullopt, false};
}

CovarianceEstimate robust_cov(const DataMatrix& data, EstimatorKind kind, ScaleKind scale,
                              unsigned threads) {
  if (kind != EstimatorKind::Kendall && kind != EstimatorKind::Spearman &&
      kind != EstimatorKind::SpearmanU)
    throw DomainError("robust_cov: estimator must be Kendall, Spearman, or SpearmanU");
  require_rows(data, 2, "robust_cov");
  reject_constant_columns(data);

  const std::size_t p = data.cols();
  std::vector<double> scales(p);
  for (std::size_t j = 0; j < p; ++j) scales[j] = scale_estimate(data.column(j), scale).value;

  SymMatrix cov(p);
  for (std::size_t j = 0; j < p; ++j) cov.set(j, j, scales[j] * scales[j]);

  const auto pairs = upper_pairs(p);
  std::atomic<bool> ties{false};
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const auto ci = data.column(i);
    const auto cj = data.column(j);
    CorrelationValue corr;
    double transformed;
    switch (kind) {
      case EstimatorKind::Kendall:
        corr = kendall_tau(ci, cj);
        transformed = sine_transform(corr);
        break;
      case EstimatorKind::Spearman:
        corr = spearman_rho(ci, cj);
        transformed = sine_transform(corr);
        break;
      default:  // SpearmanU: untransformed Spearman correlation
        corr = spearman_rho(ci, cj);
        transformed = corr.value;
        break;
    }
    if (corr.ties) ties.store(true, std::memory_order_relaxed);
    // Disjoint cells per pair, safe to write concurrently.
    cov.set(i, j, scales[i] * scales[j] * transformed);
  });

  return {cov, kind, ProjectionKind::None, std::nullopt, ties.load()};
}

CovarianceEstimate gk_cov(const DataMatrix& data, ScaleKind scale, unsigned threads) {
  require_rows(data, 2, "gk_cov");
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();

  SymMatrix cov(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double s = scale_estimate(data.column(j), scale).value;
    cov.set(j, j, s * s);
  }

  const auto pairs = upper_pairs(p);
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const auto ci = data.column(i);
    const auto cj = data.column(j);
    std::vector<double> sums(n);
    std::vector<double> diffs(n);
    for (std::size_t r = 0; r < n; ++r) {
      sums[r] = ci[r] + cj[r];
      diffs[r] = ci[r] - cj[r];
    }
    const double splus = scale_estimate(sums, scale).value;
    const double sminus = scale_estimate(diffs, scale).value;
    cov.set(i, j, 0.25 * (splus * splus - sminus * sminus));
  });

  return {cov, EstimatorKind::GKQn, ProjectionKind::None, std::nullopt, false};
}

namespace {

enum class ProbeOutcome { Feasible, InfeasibleStall, CapExhausted };

// Dykstra alternating projections between the PSD cone and the linf ball of
// radius t around `target`. Certifies feasibility when the PSD iterate lands
// within feas_eps of the ball; a stalled cone/ball gap well above feas_eps is
// read as an empty intersection.
ProbeOutcome dykstra_probe(const SymMatrix& target, double t, double feas_eps,
                           int max_iters, SymMatrix& state, SymMatrix* witness) {
  const std::size_t p = target.dim();
  SymMatrix cone_inc(p, 0.0);
  SymMatrix ball_inc(p, 0.0);

  double prev_gap = -1.0;
  int stalled = 0;
  for (int iter = 0; iter < max_iters; ++iter) {
    SymMatrix shifted(p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j) shifted.set(i, j, state(i, j) + cone_inc(i, j));
    const SymMatrix on_cone = clip_to_psd(shifted);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j)
        cone_inc.set(i, j, shifted(i, j) - on_cone(i, j));

    double gap = 0.0;
    SymMatrix next(p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i; j < p; ++j) {
        const double y = on_cone(i, j) + ball_inc(i, j);
        const double clamped = std::clamp(y, target(i, j) - t, target(i, j) + t);
        next.set(i, j, clamped);
        ball_inc.set(i, j, y - clamped);
        gap = std::max(gap, std::abs(on_cone(i, j) - clamped));
      }
    }
    state = next;

    if (gap <= feas_eps) {
      if (witness) *witness = on_cone;
      return ProbeOutcome::Feasible;
    }
    if (prev_gap >= 0.0 && std::abs(gap - prev_gap) <= 1e-5 * gap) {
      if (++stalled >= 30 && gap > 4.0 * feas_eps) return ProbeOutcome::InfeasibleStall;
    } else {
      stalled = 0;
    }
    prev_gap = gap;
  }
  return ProbeOutcome::CapExhausted;
}

}  // namespace

CovarianceEstimate linf_psd_projection(const CovarianceEstimate& input, double tol,
                                       ProjectionReport* report) {
  if (!(tol > 0.0)) throw DomainError("linf_psd_projection: tol must be positive");
  const SymMatrix& target = input.matrix;
  const std::size_t p = target.dim();

  double scale = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) scale = std::max(scale, std::abs(target(i, j)));

  CovarianceEstimate out = input;
  out.projection = ProjectionKind::LinfPSD;
  if (report) *report = ProjectionReport{};

  const double lam_min = min_eigenvalue(target);
  if (lam_min >= 0.0 || scale == 0.0) {
    out.min_eigenvalue = lam_min;
    return out;  // already feasible, distance 0
  }

  const double feas_eps = 0.5 * tol * scale;
  const int dykstra_cap = std::max(300, static_cast<int>(20 * p));

  double lo = -lam_min / static_cast<double>(p);
  double hi = -lam_min;
  SymMatrix best = add_scaled_identity(target, -lam_min);  // always feasible at t = hi
  SymMatrix state = target;
  bool certified = true;

  int steps = 0;
  for (; steps < 40; ++steps) {
    const double mid = 0.5 * (lo + hi);
    SymMatrix witness(p);
    const ProbeOutcome outcome = dykstra_probe(target, mid, feas_eps, dykstra_cap, state, &witness);
    if (outcome == ProbeOutcome::Feasible) {
      hi = mid;
      best = witness;
    } else {
      lo = mid;
      // An exhausted cap may misread a feasible radius near the boundary.
      if (outcome == ProbeOutcome::CapExhausted) certified = false;
    }
  }

  out.matrix = best;
  out.min_eigenvalue = min_eigenvalue(best);
  if (report) {
    report->distance = linf_distance(best, target);
    report->bisection_steps = steps;
    report->certified = certified;
  }
  return out;
}

CovarianceEstimate frobenius_psd_projection(const CovarianceEstimate& input) {
  double lam_min = 0.0;
  SymMatrix clipped = clip_to_psd(input.matrix, &lam_min);
  CovarianceEstimate out = input;
  out.projection = ProjectionKind::FrobeniusPSD;
  if (lam_min >= 0.0) {
    out.min_eigenvalue = lam_min;
    return out;  // unchanged
  }
  out.matrix = std::move(clipped);
  out.min_eigenvalue = min_eigenvalue(out.matrix);
  return out;
}

}  // namespace cellrobust
