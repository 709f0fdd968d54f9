#include "cellrobust/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "cellrobust/csv.hpp"
#include "cellrobust/linalg.hpp"
#include "cellrobust/parallel.hpp"
#include "cellrobust/rng.hpp"

namespace cellrobust {

std::string sweep_estimator_name(SweepEstimator e) {
  switch (e) {
    case SweepEstimator::Sample: return "sample";
    case SweepEstimator::Kendall: return "kendall";
    case SweepEstimator::Spearman: return "spearman";
    case SweepEstimator::SpearmanU: return "spearman_u";
    case SweepEstimator::Npd: return "npd";
    case SweepEstimator::InvCov: return "invcov";
  }
  return "unknown";
}

SweepEstimator sweep_estimator_from_name(const std::string& name) {
  if (name == "sample") return SweepEstimator::Sample;
  if (name == "kendall") return SweepEstimator::Kendall;
  if (name == "spearman") return SweepEstimator::Spearman;
  if (name == "spearman_u") return SweepEstimator::SpearmanU;
  if (name == "npd") return SweepEstimator::Npd;
  if (name == "invcov") return SweepEstimator::InvCov;
  throw ConfigError("unknown estimator '" + name +
                    "' (valid: sample, kendall, spearman, spearman_u, npd, invcov)");
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (schemes.empty() || estimators.empty() || contaminations.empty())
    throw ConfigError("schemes, estimators, and contaminations must be nonempty");
  if (n < 2 * cv.folds)
    throw ConfigError("n must be at least twice the fold count");
  for (const auto& spec : contaminations) spec.validate(p);
}

std::pair<std::optional<double>, std::optional<double>> fp_fn(const SupportSet& est_support,
                                                              const SymMatrix& truth) {
  const std::size_t p = truth.dim();
  for (const auto& [i, j] : est_support.edges)
    if (i >= p || j >= p)
      throw DimensionMismatchError("fp_fn: support edge outside the truth matrix");

  std::size_t true_zeros = 0;
  std::size_t true_edges = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const bool truth_edge = truth(i, j) != 0.0;
      const bool est_edge = est_support.edges.count({i, j}) > 0;
      if (truth_edge) {
        ++true_edges;
        if (!est_edge) ++false_negatives;
      } else {
        ++true_zeros;
        if (est_edge) ++false_positives;
      }
    }
  }

  std::optional<double> fp;
  std::optional<double> fn;
  if (true_zeros > 0)
    fp = static_cast<double>(false_positives) / static_cast<double>(true_zeros);
  if (true_edges > 0)
    fn = static_cast<double>(false_negatives) / static_cast<double>(true_edges);
  return {fp, fn};
}

namespace {

CovarianceEstimate sweep_covariance(const DataMatrix& data, SweepEstimator estimator,
                                    ScaleKind scale) {
  switch (estimator) {
    case SweepEstimator::Sample:
    case SweepEstimator::InvCov:
      return sample_cov(data);
    case SweepEstimator::Kendall:
      return robust_cov(data, EstimatorKind::Kendall, scale);
    case SweepEstimator::Spearman:
      return robust_cov(data, EstimatorKind::Spearman, scale);
    case SweepEstimator::SpearmanU:
      return robust_cov(data, EstimatorKind::SpearmanU, scale);
    case SweepEstimator::Npd:
      return frobenius_psd_projection(gk_cov(data, ScaleKind::Qn));
  }
  throw DomainError("sweep_covariance: unknown estimator");
}

EstimatorConfig cv_estimator_for(SweepEstimator estimator, ScaleKind scale) {
  switch (estimator) {
    case SweepEstimator::Sample: return {EstimatorKind::SampleCov, scale};
    case SweepEstimator::Kendall: return {EstimatorKind::Kendall, scale};
    case SweepEstimator::Spearman: return {EstimatorKind::Spearman, scale};
    case SweepEstimator::SpearmanU: return {EstimatorKind::SpearmanU, scale};
    case SweepEstimator::Npd: return {EstimatorKind::GKQn, ScaleKind::Qn};
    case SweepEstimator::InvCov: break;
  }
  throw DomainError("cv_estimator_for: estimator does not use cross-validation");
}

ReplicationRecord run_one(const ExperimentConfig& config, SweepEstimator estimator,
                          const SymMatrix& truth_omega, const SymMatrix& truth_sigma,
                          const DataMatrix& data, std::uint64_t seed) {
  ReplicationRecord rec;
  rec.seed = seed;
  const auto started = std::chrono::steady_clock::now();
  try {
    const CovarianceEstimate sigma_hat = sweep_covariance(data, estimator, config.scale);
    rec.cov_error_linf = linf_distance(sigma_hat.matrix, truth_sigma);

    PrecisionEstimate fit;
    if (estimator == SweepEstimator::InvCov) {
      if (data.cols() >= data.rows()) {
        rec.status = "not_invertible";
      } else {
        fit.matrix = inverse_spd(sigma_hat.matrix);
        fit.status = SolveStatus::Converged;
      }
    } else {
      CvPlan plan = config.cv;
      plan.seed = seed;
      const CvCurve curve = cv_select(data, cv_estimator_for(estimator, config.scale),
                                      config.solver, plan, 1, config.glasso_options);
      rec.lambda_star = curve.lambda_star;
      fit = (config.solver == SolverKind::GLasso)
                ? glasso(sigma_hat, curve.lambda_star, config.glasso_options)
                : clime(sigma_hat, curve.lambda_star, 1);
      if (fit.status != SolveStatus::Converged) rec.status = solve_status_name(fit.status);
    }

    if (rec.status == "ok") {
      rec.prec_error_linf = linf_distance(fit.matrix, truth_omega);
      const auto [fp, fn] = fp_fn(support(fit), truth_omega);
      rec.fp = fp;
      rec.fn = fn;
    }
  } catch (const Error& e) {
    rec.status = e.kind();
    if (rec.status == "PositiveDefinitenessError") rec.status = "not_invertible";
  }
  rec.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

void aggregate(SweepCell& cell) {
  cell.b_requested = cell.records.size();
  double sum_cov = 0.0;
  double sum_prec = 0.0;
  double sum_fp = 0.0;
  double sum_fn = 0.0;
  std::size_t n_fp = 0;
  std::size_t n_fn = 0;
  std::size_t ok = 0;
  for (const auto& rec : cell.records) {
    if (rec.status != "ok") continue;
    ++ok;
    sum_cov += rec.cov_error_linf;
    sum_prec += rec.prec_error_linf;
    if (rec.fp) {
      sum_fp += *rec.fp;
      ++n_fp;
    }
    if (rec.fn) {
      sum_fn += *rec.fn;
      ++n_fn;
    }
  }
  cell.b_effective = ok;
  if (ok == 0) return;
  cell.mean_cov = sum_cov / static_cast<double>(ok);
  cell.mean_prec = sum_prec / static_cast<double>(ok);
  if (n_fp > 0) cell.mean_fp = sum_fp / static_cast<double>(n_fp);
  if (n_fn > 0) cell.mean_fn = sum_fn / static_cast<double>(n_fn);

  double var_cov = 0.0;
  double var_prec = 0.0;
  for (const auto& rec : cell.records) {
    if (rec.status != "ok") continue;
    var_cov += (rec.cov_error_linf - cell.mean_cov) * (rec.cov_error_linf - cell.mean_cov);
    var_prec +=
        (rec.prec_error_linf - cell.mean_prec) * (rec.prec_error_linf - cell.mean_prec);
  }
  if (ok > 1) {
    cell.sd_cov = std::sqrt(var_cov / static_cast<double>(ok - 1));
    cell.sd_prec = std::sqrt(var_prec / static_cast<double>(ok - 1));
  }
}

}  // namespace

ExperimentResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;

  struct Task {
    std::size_t scheme_index;
    std::size_t contamination_index;
    std::size_t replication;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.schemes.size(); ++s)
    for (std::size_t c = 0; c < config.contaminations.size(); ++c)
      for (std::size_t r = 0; r < config.replications; ++r) tasks.push_back({s, c, r});

  // Truth matrices are fixed per scheme; the Sparse draw comes from the base
  // seed so results are reproducible byte for byte.
  std::vector<SymMatrix> omegas(config.schemes.size());
  std::vector<SymMatrix> sigmas(config.schemes.size());
  for (std::size_t s = 0; s < config.schemes.size(); ++s) {
    omegas[s] = make_precision({config.schemes[s], config.p, config.base_seed});
    sigmas[s] = inverse_spd(omegas[s]);
  }

  // records[task][estimator]
  std::vector<std::vector<ReplicationRecord>> records(
      tasks.size(), std::vector<ReplicationRecord>(config.estimators.size()));

  parallel_for(tasks.size(), config.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    const ContaminationSpec& spec = config.contaminations[task.contamination_index];
    const std::uint64_t seed = config.base_seed + task.replication;

    DataMatrix data;
    if (spec.mechanism == Mechanism::MultivariateT ||
        spec.mechanism == Mechanism::AlternativeT) {
      data = sample_heavy_tail(omegas[task.scheme_index], config.n, spec.mechanism,
                               spec.t_dof, seed);
    } else {
      // The clean sample depends only on (scheme, replication), so mechanism
      // contrasts share their underlying draws.
      data = sample_mvn(omegas[task.scheme_index], config.n, seed);
      if (spec.mechanism != Mechanism::None)
        data = contaminate(data, spec, seed ^ 0xC2B2AE3D27D4EB4FULL);
    }

    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
      records[t][e] = run_one(config, config.estimators[e], omegas[task.scheme_index],
                              sigmas[task.scheme_index], data, seed);
    }
  });

  for (std::size_t s = 0; s < config.schemes.size(); ++s) {
    for (std::size_t e = 0; e < config.estimators.size(); ++e) {
      for (std::size_t c = 0; c < config.contaminations.size(); ++c) {
        SweepCell cell;
        cell.scheme = config.schemes[s];
        cell.estimator = config.estimators[e];
        cell.contamination = config.contaminations[c];
        for (std::size_t t = 0; t < tasks.size(); ++t) {
          if (tasks[t].scheme_index == s && tasks[t].contamination_index == c)
            cell.records.push_back(records[t][e]);
        }
        std::sort(cell.records.begin(), cell.records.end(),
                  [](const ReplicationRecord& a, const ReplicationRecord& b) {
                    return a.seed < b.seed;
                  });
        aggregate(cell);
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

void write_sweep_csv(const std::string& path, const ExperimentResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "Scheme,Estimator,Mechanism,Epsilon,Cov,Prec,FP,FN,B\n";
  for (const auto& cell : result.cells) {
    out << scheme_name(cell.scheme) << ',' << sweep_estimator_name(cell.estimator) << ','
        << mechanism_name(cell.contamination.mechanism) << ','
        << format_double(cell.contamination.max_epsilon()) << ','
        << (cell.b_effective ? format_double(cell.mean_cov) : std::string()) << ','
        << (cell.b_effective ? format_double(cell.mean_prec) : std::string()) << ','
        << format_optional(cell.mean_fp) << ',' << format_optional(cell.mean_fn) << ','
        << cell.b_effective << '\n';
  }
}

void write_replications_csv(const std::string& path, const ExperimentResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "Scheme,Estimator,Mechanism,Epsilon,Seed,Status,Cov,Prec,FP,FN,Lambda,WallTime\n";
  for (const auto& cell : result.cells) {
    for (const auto& rec : cell.records) {
      out << scheme_name(cell.scheme) << ',' << sweep_estimator_name(cell.estimator) << ','
          << mechanism_name(cell.contamination.mechanism) << ','
          << format_double(cell.contamination.max_epsilon()) << ',' << rec.seed << ','
          << rec.status << ','
          << (rec.status == "ok" ? format_double(rec.cov_error_linf) : std::string()) << ','
          << (rec.status == "ok" ? format_double(rec.prec_error_linf) : std::string()) << ','
          << format_optional(rec.fp) << ',' << format_optional(rec.fn) << ','
          << format_optional(rec.lambda_star) << ',' << format_double(rec.wall_time_sec)
          << '\n';
    }
  }
}

void write_manifest_json(const std::string& path, const ExperimentConfig& config) {
  nlohmann::json manifest;
  manifest["version"] = kVersion;
  nlohmann::json cfg;
  for (const auto& s : config.schemes) cfg["schemes"].push_back(scheme_name(s));
  for (const auto& e : config.estimators)
    cfg["estimators"].push_back(sweep_estimator_name(e));
  for (const auto& c : config.contaminations) {
    nlohmann::json spec;
    spec["mechanism"] = mechanism_name(c.mechanism);
    spec["epsilon"] = c.epsilon.size() == 1 ? nlohmann::json(c.epsilon[0])
                                            : nlohmann::json(c.epsilon);
    spec["outlier_mean"] = c.outlier_mean;
    spec["outlier_var"] = c.outlier_var;
    spec["t_dof"] = c.t_dof;
    cfg["contaminations"].push_back(spec);
  }
  cfg["n"] = config.n;
  cfg["p"] = config.p;
  cfg["replications"] = config.replications;
  cfg["base_seed"] = config.base_seed;
  cfg["solver"] = solver_name(config.solver);
  cfg["scale"] = config.scale == ScaleKind::Mad ? "mad" : "qn";
  cfg["threads"] = config.threads;
  cfg["cv"] = {{"folds", config.cv.folds},
               {"grid_size", config.cv.grid_size},
               {"lambda_min_ratio", config.cv.lambda_min_ratio}};
  cfg["glasso_tol"] = config.glasso_options.tol;
  cfg["glasso_max_iter"] = config.glasso_options.max_iter;
  manifest["config"] = cfg;
  nlohmann::json seeds = nlohmann::json::array();
  for (std::size_t r = 0; r < config.replications; ++r)
    seeds.push_back(config.base_seed + r);
  manifest["replication_seeds"] = seeds;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << manifest.dump(2) << '\n';
}

ClimeBreakdownReport clime_breakdown_demo(std::size_t n) {
  if (n < 3) throw InsufficientDataError("clime_breakdown_demo: needs n >= 3");

  // Rows (k, -k) for k = 1..n, with the last row flipped to (n, n) in the
  // uncorrupted matrix. The corruption restores perfect anticorrelation by
  // changing one entry per column.
  DataMatrix original(n, 2);
  DataMatrix corrupted(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = static_cast<double>(k + 1);
    original(k, 0) = a;
    original(k, 1) = (k + 1 == n) ? a : -a;
    corrupted(k, 0) = a;
    corrupted(k, 1) = -a;
  }

  const CovarianceEstimate sigma_original =
      robust_cov(original, EstimatorKind::Kendall, ScaleKind::Mad);
  const CovarianceEstimate sigma_corrupted =
      robust_cov(corrupted, EstimatorKind::Kendall, ScaleKind::Mad);

  auto feasible_at = [](const CovarianceEstimate& sigma, double lambda) {
    return clime(sigma, lambda).status != SolveStatus::Infeasible;
  };

  ClimeBreakdownReport report;
  report.n = n;
  report.original_feasible = feasible_at(sigma_original, 0.4);
  report.corrupted_infeasible_at_049 = !feasible_at(sigma_corrupted, 0.49);
  report.corrupted_feasible_at_051 = feasible_at(sigma_corrupted, 0.51);
  report.corrupted_feasible_at_06 = feasible_at(sigma_corrupted, 0.6);

  report.infeasible_below_half = true;
  const double guard = 0.5 * (1.0 - 1e-6);
  for (int k = 1; k <= 10; ++k) {
    const double lambda = guard * static_cast<double>(k) / 10.0;
    if (feasible_at(sigma_corrupted, lambda)) {
      report.infeasible_below_half = false;
      break;
    }
  }

  double lo = 0.4;
  double hi = 0.6;
  for (int iter = 0; iter < 20; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_at(sigma_corrupted, mid))
      hi = mid;
    else
      lo = mid;
  }
  report.boundary = 0.5 * (lo + hi);
  return report;
}

GlassoBreakdownReport glasso_breakdown_demo(std::size_t n, std::size_t p, double a,
                                            std::uint64_t seed) {
  if (!(a > 0.0)) throw DomainError("glasso_breakdown_demo: a must be positive");
  if (n < 4) throw InsufficientDataError("glasso_breakdown_demo: needs n >= 4");

  GlassoBreakdownReport report;
  report.n = n;
  report.p = p;
  report.corruption_bound = a;
  const double phi075 = std_normal_quantile(0.75);
  report.eigenvalue_floor = phi075 * phi075 / (2.0 * a * a);

  const DataMatrix clean = sample_mvn(SymMatrix::identity(p), n, seed);

  // Majority corruption: ceil(n/2) + 1 entries per column moved into (0, a).
  DataMatrix majority = clean;
  Rng rng(seed ^ 0xA0761D6478BD642FULL);
  const std::size_t majority_count = (n + 1) / 2 + 1;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < majority_count; ++i)
      majority(i, j) = rng.uniform(0.0, a);

  const CovarianceEstimate sigma_hat =
      robust_cov(majority, EstimatorKind::Kendall, ScaleKind::Mad);
  const CovarianceEstimate sigma_check = linf_psd_projection(sigma_hat);

  double max_offdiag = 0.0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      max_offdiag = std::max(max_offdiag, std::abs(sigma_check.matrix(i, j)));
  const PrecisionEstimate fit = glasso(sigma_check, 0.2 * max_offdiag);
  report.glasso_status = solve_status_name(fit.status);
  if (fit.status == SolveStatus::Converged) {
    report.top_eigenvalue = sym_eigen(fit.matrix).values.front();
    report.floor_satisfied = report.top_eigenvalue >= report.eigenvalue_floor;
  }

  // Under-half corruption: the MAD raw values must stay inside the clean
  // columns' deviation ranges.
  DataMatrix minority = clean;
  const std::size_t minority_count = n / 2 - 1;
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < minority_count; ++i)
      minority(i, j) = 1e9 * static_cast<double>(i + j + 1);

  // Under half corruption the shifted median is still a clean value, so the
  // MAD cannot exceed the clean column's spread no matter how large the
  // corruptions are.
  report.resistance_ok = true;
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = clean.column(j);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double corrupted_raw = mad(minority.column(j)).raw;
    if (!(corrupted_raw > 0.0) || corrupted_raw > *hi - *lo) {
      report.resistance_ok = false;
      break;
    }
  }
  return report;
}

}  // namespace cellrobust
