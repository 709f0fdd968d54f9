// Command-line front end: estimation, simulation sweeps, cross-validation,
// and the breakdown demonstrations. See the README for the config schema.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellrobust/csv.hpp"
#include "cellrobust/experiments.hpp"
#include "cellrobust/linalg.hpp"

namespace {

using nlohmann::json;
using namespace cellrobust;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitSolver = 3;

void print_json_error(const std::string& type, const std::string& message) {
  json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << '\n';
}

// Exit-code classes: usage errors are config/name problems, data errors come
// from the inputs, anything else from the library is treated as a data error
// unless a solver reported it.
int exit_code_for(const Error& e) {
  if (e.kind() == "ConfigError") return kExitUsage;
  return kExitData;
}

std::uint64_t seed_fallback(std::optional<std::uint64_t> flag_seed) {
  if (flag_seed) return *flag_seed;
  if (const char* env = std::getenv("CELLROBUST_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ConfigError("CELLROBUST_SEED is not a valid integer");
    }
  }
  return 1;
}

EstimatorConfig estimator_config_from(const std::string& estimator,
                                      const std::string& scale) {
  EstimatorConfig config;
  const SweepEstimator kind = sweep_estimator_from_name(estimator);
  config.scale = (scale == "qn") ? ScaleKind::Qn : ScaleKind::Mad;
  if (scale != "mad" && scale != "qn")
    throw ConfigError("unknown scale '" + scale + "' (valid: mad, qn)");
  switch (kind) {
    case SweepEstimator::Sample: config.kind = EstimatorKind::SampleCov; break;
    case SweepEstimator::Kendall: config.kind = EstimatorKind::Kendall; break;
    case SweepEstimator::Spearman: config.kind = EstimatorKind::Spearman; break;
    case SweepEstimator::SpearmanU: config.kind = EstimatorKind::SpearmanU; break;
    case SweepEstimator::Npd: config.kind = EstimatorKind::GKQn; break;
    case SweepEstimator::InvCov:
      throw ConfigError("invcov is a sweep baseline, not an estimate subcommand input");
  }
  return config;
}

SolverKind solver_from_name(const std::string& name) {
  if (name == "glasso") return SolverKind::GLasso;
  if (name == "clime") return SolverKind::Clime;
  throw ConfigError("unknown solver '" + name + "' (valid: glasso, clime)");
}

ContaminationSpec contamination_from_json(const json& j) {
  ContaminationSpec spec;
  spec.mechanism = mechanism_from_name(j.value("mechanism", "none"));
  if (j.contains("epsilon")) {
    if (j["epsilon"].is_array())
      spec.epsilon = j["epsilon"].get<std::vector<double>>();
    else
      spec.epsilon = {j["epsilon"].get<double>()};
  }
  spec.outlier_mean = j.value("outlier_mean", 10.0);
  spec.outlier_var = j.value("outlier_var", 0.2);
  spec.t_dof = j.value("t_dof", 3.0);
  return spec;
}

ExperimentConfig sweep_config_from_json(const json& j) {
  ExperimentConfig config;
  config.schemes.clear();
  for (const auto& s : j.at("schemes")) config.schemes.push_back(scheme_from_name(s));
  config.estimators.clear();
  for (const auto& e : j.at("estimators"))
    config.estimators.push_back(sweep_estimator_from_name(e));
  config.contaminations.clear();
  for (const auto& c : j.at("contaminations"))
    config.contaminations.push_back(contamination_from_json(c));
  config.n = j.at("n").get<std::size_t>();
  config.p = j.at("p").get<std::size_t>();
  config.replications = j.value("replications", std::size_t{20});
  config.base_seed = j.value("base_seed", std::uint64_t{1});
  config.solver = solver_from_name(j.value("solver", "glasso"));
  const std::string scale = j.value("scale", "mad");
  if (scale != "mad" && scale != "qn")
    throw ConfigError("unknown scale '" + scale + "' (valid: mad, qn)");
  config.scale = scale == "qn" ? ScaleKind::Qn : ScaleKind::Mad;
  config.threads = j.value("threads", 0u);
  if (j.contains("cv")) {
    config.cv.folds = j["cv"].value("folds", std::size_t{5});
    config.cv.grid_size = j["cv"].value("grid_size", std::size_t{15});
    config.cv.lambda_min_ratio = j["cv"].value("lambda_min_ratio", 0.01);
  }
  config.glasso_options.tol = j.value("glasso_tol", 1e-6);
  config.glasso_options.max_iter = j.value("glasso_max_iter", 500);
  config.output_path = j.value("output", "");
  config.manifest_path = j.value("manifest", "");
  config.replications_path = j.value("replication_output", "");
  return config;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse failure: " + std::string(e.what()));
  }
  return j;
}

int run_estimate(const std::string& input, const std::string& output,
                 const std::string& estimator, const std::string& scale,
                 const std::string& solver, std::optional<double> lambda,
                 const std::string& projection, unsigned threads,
                 std::optional<std::uint64_t> seed_flag, std::size_t folds) {
  const DataMatrix data = read_data_csv(input);
  const EstimatorConfig est = estimator_config_from(estimator, scale);
  CovarianceEstimate sigma = estimate_covariance(data, est, threads);
  if (projection == "linf")
    sigma = linf_psd_projection(sigma);
  else if (projection == "frobenius")
    sigma = frobenius_psd_projection(sigma);
  else if (projection != "none")
    throw ConfigError("unknown projection '" + projection +
                      "' (valid: none, linf, frobenius)");

  double lambda_star;
  if (lambda) {
    lambda_star = *lambda;
  } else {
    CvPlan plan;
    plan.folds = folds;
    plan.seed = seed_fallback(seed_flag);
    lambda_star = cv_select(data, est, solver_from_name(solver), plan, threads).lambda_star;
  }

  const PrecisionEstimate fit = (solver_from_name(solver) == SolverKind::GLasso)
                                    ? glasso(sigma, lambda_star)
                                    : clime(sigma, lambda_star, threads);
  if (fit.status == SolveStatus::Diverged || fit.status == SolveStatus::Infeasible) {
    print_json_error(solve_status_name(fit.status), fit.diagnostics.message);
    return kExitSolver;
  }
  write_matrix_csv(output, fit.matrix);

  json info;
  info["lambda"] = lambda_star;
  info["solver"] = solver;
  info["status"] = solve_status_name(fit.status);
  info["iterations"] = fit.diagnostics.iterations;
  info["kkt_residual"] = fit.diagnostics.kkt_residual;
  info["output"] = output;
  std::cout << info.dump(2) << '\n';
  return kExitOk;
}

int run_simulate(const std::string& scheme, std::size_t n, std::size_t p,
                 const std::string& mechanism, double epsilon,
                 std::optional<std::uint64_t> seed_flag, const std::string& output,
                 const std::string& mask_path, const std::string& truth_path) {
  const std::uint64_t seed = seed_fallback(seed_flag);
  const SymMatrix omega = make_precision({scheme_from_name(scheme), p, seed});

  ContaminationSpec spec;
  spec.mechanism = mechanism_from_name(mechanism);
  spec.epsilon = {epsilon};

  DataMatrix data;
  if (spec.mechanism == Mechanism::MultivariateT ||
      spec.mechanism == Mechanism::AlternativeT) {
    data = sample_heavy_tail(omega, n, spec.mechanism, spec.t_dof, seed);
  } else {
    data = sample_mvn(omega, n, seed);
    if (spec.mechanism != Mechanism::None)
      data = contaminate(data, spec, seed ^ 0xC2B2AE3D27D4EB4FULL);
  }

  write_data_csv(output, data);
  if (!mask_path.empty()) write_mask_csv(mask_path, data);
  if (!truth_path.empty()) write_matrix_csv(truth_path, omega);
  return kExitOk;
}

int run_cv(const std::string& input, const std::string& estimator, const std::string& scale,
           const std::string& solver, std::size_t folds, std::size_t grid_size,
           std::optional<std::uint64_t> seed_flag, const std::string& output,
           unsigned threads) {
  const DataMatrix data = read_data_csv(input);
  CvPlan plan;
  plan.folds = folds;
  plan.grid_size = grid_size;
  plan.seed = seed_fallback(seed_flag);
  const CvCurve curve = cv_select(data, estimator_config_from(estimator, scale),
                                  solver_from_name(solver), plan, threads);

  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw IoError("cannot open '" + output + "' for writing");
    out << "lambda,mean_score";
    for (std::size_t f = 0; f < plan.folds; ++f) out << ",fold" << (f + 1);
    out << '\n';
    for (std::size_t g = 0; g < curve.lambdas.size(); ++g) {
      out << format_double(curve.lambdas[g]) << ',' << format_double(curve.mean_scores[g]);
      for (double s : curve.fold_scores[g]) out << ',' << format_double(s);
      out << '\n';
    }
  }

  json info;
  info["lambda_star"] = curve.lambda_star;
  info["lambda_star_index"] = curve.lambda_star_index;
  if (!output.empty()) info["curve"] = output;
  std::cout << info.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust covariance and sparse precision matrix estimation under "
               "cellwise contamination"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  unsigned threads = 0;
  app.add_option("--seed", seed_flag, "RNG seed (fallback: CELLROBUST_SEED, then 1)");
  app.add_option("--threads", threads, "worker threads (0 = all cores, 1 = serial)");

  // estimate
  auto* est_cmd = app.add_subcommand("estimate", "fit a precision matrix from a data CSV");
  std::string est_input, est_output = "omega.csv", est_estimator = "kendall";
  std::string est_scale = "mad", est_solver = "glasso", est_projection = "none";
  std::optional<double> est_lambda;
  std::size_t est_folds = 5;
  est_cmd->add_option("--input", est_input, "input data CSV (header + rows)")->required();
  est_cmd->add_option("--output", est_output, "output matrix CSV");
  est_cmd->add_option("--estimator", est_estimator, "sample|kendall|spearman|spearman_u|npd");
  est_cmd->add_option("--scale", est_scale, "mad|qn");
  est_cmd->add_option("--solver", est_solver, "glasso|clime");
  est_cmd->add_option("--lambda", est_lambda, "penalty (omitted: cross-validated)");
  est_cmd->add_option("--projection", est_projection, "none|linf|frobenius");
  est_cmd->add_option("--cv-folds", est_folds, "folds when cross-validating");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic data CSV");
  std::string sim_scheme = "banded", sim_mechanism = "none", sim_output = "data.csv";
  std::string sim_mask, sim_truth;
  std::size_t sim_n = 200, sim_p = 120;
  double sim_epsilon = 0.05;
  sim_cmd->add_option("--scheme", sim_scheme, "banded|sparse|dense|diagonal");
  sim_cmd->add_option("--n", sim_n, "rows");
  sim_cmd->add_option("--p", sim_p, "columns");
  sim_cmd->add_option("--mechanism", sim_mechanism,
                      "none|cellwise|rowwise|missing|multivariate_t|alternative_t");
  sim_cmd->add_option("--epsilon", sim_epsilon, "contamination fraction");
  sim_cmd->add_option("--output", sim_output, "data CSV path");
  sim_cmd->add_option("--mask", sim_mask, "optional 0/1 mask CSV path");
  sim_cmd->add_option("--truth-omega", sim_truth, "optional truth precision CSV path");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run a simulation study from a JSON config");
  std::string sweep_config_path, sweep_output, sweep_manifest, sweep_replications;
  sweep_cmd->add_option("--config", sweep_config_path, "JSON config file")->required();
  sweep_cmd->add_option("--output", sweep_output, "results CSV (overrides config)");
  sweep_cmd->add_option("--manifest", sweep_manifest, "manifest JSON (overrides config)");
  sweep_cmd->add_option("--replication-output", sweep_replications,
                        "per-replication CSV (overrides config)");

  // cv
  auto* cv_cmd = app.add_subcommand("cv", "cross-validate the penalty on a data CSV");
  std::string cv_input, cv_estimator = "kendall", cv_scale = "mad", cv_solver = "glasso";
  std::string cv_output;
  std::size_t cv_folds = 5, cv_grid = 15;
  cv_cmd->add_option("--input", cv_input, "input data CSV")->required();
  cv_cmd->add_option("--estimator", cv_estimator, "sample|kendall|spearman|spearman_u|npd");
  cv_cmd->add_option("--scale", cv_scale, "mad|qn");
  cv_cmd->add_option("--solver", cv_solver, "glasso|clime");
  cv_cmd->add_option("--folds", cv_folds, "fold count");
  cv_cmd->add_option("--grid-size", cv_grid, "lambda grid size");
  cv_cmd->add_option("--curve", cv_output, "optional cv-curve CSV path");

  // breakdown
  auto* break_cmd = app.add_subcommand("breakdown", "run a breakdown demonstration");
  std::string break_kind;
  std::size_t break_n = 11, break_p = 8;
  double break_a = 0.01;
  break_cmd->add_option("kind", break_kind, "clime|glasso")->required();
  break_cmd->add_option("--n", break_n, "sample size");
  break_cmd->add_option("--p", break_p, "dimension (glasso demo)");
  break_cmd->add_option("--a", break_a, "corruption magnitude bound (glasso demo)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (est_cmd->parsed()) {
      return run_estimate(est_input, est_output, est_estimator, est_scale, est_solver,
                          est_lambda, est_projection, threads, seed_flag, est_folds);
    }
    if (sim_cmd->parsed()) {
      return run_simulate(sim_scheme, sim_n, sim_p, sim_mechanism, sim_epsilon, seed_flag,
                          sim_output, sim_mask, sim_truth);
    }
    if (sweep_cmd->parsed()) {
      ExperimentConfig config = sweep_config_from_json(load_json(sweep_config_path));
      if (!sweep_output.empty()) config.output_path = sweep_output;
      if (!sweep_manifest.empty()) config.manifest_path = sweep_manifest;
      if (!sweep_replications.empty()) config.replications_path = sweep_replications;
      if (seed_flag) config.base_seed = *seed_flag;
      if (threads != 0) config.threads = threads;
      if (config.output_path.empty())
        throw ConfigError("sweep needs an output path (config 'output' or --output)");

      const ExperimentResult result = run_sweep(config);
      write_sweep_csv(config.output_path, result);
      if (!config.replications_path.empty())
        write_replications_csv(config.replications_path, result);
      if (!config.manifest_path.empty())
        write_manifest_json(config.manifest_path, config);
      std::cout << "wrote " << config.output_path << '\n';
      return kExitOk;
    }
    if (cv_cmd->parsed()) {
      return run_cv(cv_input, cv_estimator, cv_scale, cv_solver, cv_folds, cv_grid,
                    seed_flag, cv_output, threads);
    }
    if (break_cmd->parsed()) {
      json report;
      if (break_kind == "clime") {
        const ClimeBreakdownReport r = clime_breakdown_demo(break_n);
        report = {{"demo", "clime"},
                  {"n", r.n},
                  {"original_feasible", r.original_feasible},
                  {"corrupted_infeasible_at_0.49", r.corrupted_infeasible_at_049},
                  {"corrupted_feasible_at_0.51", r.corrupted_feasible_at_051},
                  {"corrupted_feasible_at_0.6", r.corrupted_feasible_at_06},
                  {"infeasible_below_half", r.infeasible_below_half},
                  {"feasibility_boundary", r.boundary}};
      } else if (break_kind == "glasso") {
        const GlassoBreakdownReport r =
            glasso_breakdown_demo(break_n, break_p, break_a, seed_fallback(seed_flag));
        report = {{"demo", "glasso"},
                  {"n", r.n},
                  {"p", r.p},
                  {"a", r.corruption_bound},
                  {"eigenvalue_floor", r.eigenvalue_floor},
                  {"top_eigenvalue", r.top_eigenvalue},
                  {"floor_satisfied", r.floor_satisfied},
                  {"resistance_ok", r.resistance_ok},
                  {"glasso_status", r.glasso_status}};
      } else {
        throw ConfigError("unknown breakdown demo '" + break_kind +
                          "' (valid: clime, glasso)");
      }
      std::cout << report.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const AllInfeasibleError& e) {
    print_json_error(e.kind(), e.what());
    return kExitSolver;
  } catch (const Error& e) {
    print_json_error(e.kind(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    print_json_error("Internal", e.what());
    return kExitData;
  }
  return kExitUsage;
}
