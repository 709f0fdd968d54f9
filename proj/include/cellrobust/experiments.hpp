#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellrobust/model_selection.hpp"
#include "cellrobust/simulation.hpp"

namespace cellrobust {

inline constexpr const char* kVersion = "cellrobust 0.1.0";

// Covariance inputs compared by the sweep. Npd is the Qn pairwise covariance
// with the Frobenius PSD projection; InvCov inverts the sample covariance
// directly (p < n) and skips the penalized solver.
enum class SweepEstimator { Sample, Kendall, Spearman, SpearmanU, Npd, InvCov };

std::string sweep_estimator_name(SweepEstimator e);
SweepEstimator sweep_estimator_from_name(const std::string& name);

struct ExperimentConfig {
  std::vector<SchemeKind> schemes = {SchemeKind::Banded};
  std::vector<SweepEstimator> estimators = {SweepEstimator::Kendall};
  std::vector<ContaminationSpec> contaminations = {{}};
  std::size_t n = 200;
  std::size_t p = 120;
  std::size_t replications = 20;
  std::uint64_t base_seed = 1;
  CvPlan cv;
  SolverKind solver = SolverKind::GLasso;
  ScaleKind scale = ScaleKind::Mad;
  unsigned threads = 0;  // 0 = all cores
  GlassoOptions glasso_options;
  std::string output_path;
  std::string manifest_path;
  std::string replications_path;

  void validate() const;
};

struct ReplicationRecord {
  std::uint64_t seed = 0;
  std::string status = "ok";
  double cov_error_linf = 0.0;
  double prec_error_linf = 0.0;
  std::optional<double> fp;
  std::optional<double> fn;
  std::optional<double> lambda_star;
  double wall_time_sec = 0.0;
};

// One (scheme, estimator, contamination) combination with its replication
// records and aggregates over the successful ones.
struct SweepCell {
  SchemeKind scheme = SchemeKind::Banded;
  SweepEstimator estimator = SweepEstimator::Kendall;
  ContaminationSpec contamination;
  std::vector<ReplicationRecord> records;
  std::size_t b_requested = 0;
  std::size_t b_effective = 0;
  double mean_cov = 0.0;
  double mean_prec = 0.0;
  double sd_cov = 0.0;
  double sd_prec = 0.0;
  std::optional<double> mean_fp;
  std::optional<double> mean_fn;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<SweepCell> cells;
};

// FP / FN support-recovery rates against the exact zero pattern of the true
// precision matrix, over off-diagonal entries. A rate whose denominator is
// empty (no true zeros, or no true edges) is undefined and reported as null.
std::pair<std::optional<double>, std::optional<double>> fp_fn(const SupportSet& est_support,
                                                              const SymMatrix& truth);

// Full protocol: per replication, generate the scheme's precision matrix,
// sample, contaminate, estimate each covariance, cross-validate the penalty,
// solve, and score against the truth. Failed solves are recorded with their
// status and excluded from the means; b_effective reports what remains.
ExperimentResult run_sweep(const ExperimentConfig& config);

void write_sweep_csv(const std::string& path, const ExperimentResult& result);
void write_replications_csv(const std::string& path, const ExperimentResult& result);
void write_manifest_json(const std::string& path, const ExperimentConfig& config);

struct ClimeBreakdownReport {
  std::size_t n = 0;
  bool original_feasible = false;        // lambda = 0.4, uncorrupted data
  bool corrupted_infeasible_at_049 = false;
  bool corrupted_feasible_at_051 = false;
  bool corrupted_feasible_at_06 = false;
  bool infeasible_below_half = false;    // grid of lambdas under 0.5 (1 - tol)
  double boundary = 0.0;                 // bisected feasibility threshold
};

// Two-column construction: rows (k, -k) with last row (n, n). Flipping the
// single entry X_{n,2} to -n makes the columns exactly anticorrelated and the
// column programs infeasible for every lambda below 1/2.
ClimeBreakdownReport clime_breakdown_demo(std::size_t n);

struct GlassoBreakdownReport {
  std::size_t n = 0;
  std::size_t p = 0;
  double corruption_bound = 0.0;      // the value a
  double eigenvalue_floor = 0.0;      // [Phi^{-1}(0.75)]^2 / (2 a^2)
  double top_eigenvalue = 0.0;        // lambda_1 of the fitted precision matrix
  bool floor_satisfied = false;
  bool resistance_ok = false;         // under-half corruption keeps MADs in range
  std::string glasso_status;
};

// Majority corruption of every column by values in (0, a), pushed through
// robust covariance -> linf PSD projection -> glasso; the top eigenvalue of
// the fit must clear the explosion floor. A second pass with under-half
// corruption checks that the MAD scales stay within the clean deviation
// range.
GlassoBreakdownReport glasso_breakdown_demo(std::size_t n, std::size_t p, double a,
                                            std::uint64_t seed = 7);

}  // namespace cellrobust
