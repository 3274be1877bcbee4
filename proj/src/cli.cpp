#include "hierband/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "hierband/csv.hpp"
#include "hierband/cv.hpp"
#include "hierband/discriminant.hpp"
#include "hierband/kernels.hpp"
#include "hierband/norms.hpp"
#include "hierband/psd.hpp"
#include "hierband/rng.hpp"
#include "hierband/sim.hpp"
#include "hierband/solver.hpp"
#include "json_writer.hpp"

namespace hierband {

namespace {

constexpr const char* kSchemaVersion = "1";

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

WeightScheme scheme_from_flags(const std::string& weights, const std::string& weights_file, int p) {
  if (!weights_file.empty()) return WeightScheme::custom(p, read_weight_table(weights_file, p));
  return WeightScheme::named(weights, p);
}

SymMatrix load_covariance(const std::string& input, bool cov_input, bool center) {
  if (cov_input) return read_sym_matrix(input);
  DataMatrix X = read_data_matrix(input);
  return sample_covariance(X, center);
}

void emit_fit_config(JsonWriter& j, const std::string& subcommand, const std::string& input,
                     bool cov_input, bool center, const std::string& weights) {
  j.key("config").begin_object();
  j.key("subcommand").value(subcommand);
  j.key("input").value(input);
  j.key("cov_input").value(cov_input);
  j.key("center").value(center);
  j.key("weights").value(weights);
}

int cmd_fit(const std::string& input, bool cov_input, bool center, double lambda,
            const std::string& weights, const std::string& weights_file, bool pd, double delta,
            const std::string& outdir) {
  SymMatrix S = load_covariance(input, cov_input, center);
  WeightScheme scheme = scheme_from_flags(weights, weights_file, S.dim());

  JsonWriter j;
  j.begin_object();
  j.key("schema_version").value(kSchemaVersion);
  emit_fit_config(j, "fit", input, cov_input, center, scheme.name());
  j.key("lambda").value(lambda);
  j.key("pd").value(pd);
  if (pd) j.key("delta").value(delta > 0 ? delta : default_delta(S));
  j.end_object();  // config

  if (!pd) {
    FitConfig cfg(lambda, scheme);
    FitResult f = fit(S, cfg);
    write_sym_matrix(f.sigma_hat, join_path(outdir, "sigma_hat.csv"));
    j.key("lambda").value(lambda);
    j.key("k_hat").value(f.k_hat);
    j.key("nu").array(f.nu);
    j.key("taper").array(f.taper);
    j.key("primal_obj").value(f.primal_obj);
    j.key("dual_gap").value(f.dual_gap);
  } else {
    PsdFitConfig cfg(lambda, scheme, delta > 0 ? delta : default_delta(S));
    PsdFitResult r = fit_psd(S, cfg);
    write_sym_matrix(r.sigma_tilde, join_path(outdir, "sigma_hat.csv"));
    j.key("lambda").value(lambda);
    j.key("k_hat").value(r.threshold_fit.k_hat);
    j.key("nu").array(r.threshold_fit.nu);
    j.key("taper").array(r.threshold_fit.taper);
    j.key("primal_obj").value(r.primal_obj);
    j.key("dual_gap").value(r.threshold_fit.dual_gap);
    j.key("min_eig").value(r.min_eig);
    j.key("outer_iters").value(r.outer_iters);
    j.key("converged").value(r.converged);
    j.key("coincides_with_unconstrained").value(r.coincides_with_unconstrained);
  }
  j.end_object();
  write_text_atomic(join_path(outdir, "fit.json"), j.str() + "\n");
  return 0;
}

int cmd_path(const std::string& input, bool cov_input, bool center, int grid, double ratio,
             const std::string& weights, const std::string& weights_file, const std::string& out) {
  SymMatrix S = load_covariance(input, cov_input, center);
  WeightScheme scheme = scheme_from_flags(weights, weights_file, S.dim());
  std::vector<double> lambdas = make_lambda_grid(lambda_max(S, scheme), grid, ratio);
  std::vector<FitResult> fits = path(S, lambdas, scheme);
  std::ostringstream os;
  os << "lambda,k_hat,frobenius_to_s,dual_gap\n";
  for (size_t i = 0; i < fits.size(); ++i) {
    os << format_double(lambdas[i]) << ',' << fits[i].k_hat << ','
       << format_double(frobenius_dist(fits[i].sigma_hat, S)) << ','
       << format_double(fits[i].dual_gap) << '\n';
  }
  write_text_atomic(out, os.str());
  return 0;
}

int cmd_cv(const std::string& input, bool center, int folds, int grid, double ratio, uint64_t seed,
           const std::string& weights, const std::string& weights_file, const std::string& out) {
  DataMatrix X = read_data_matrix(input);
  SymMatrix S = sample_covariance(X, center);
  WeightScheme scheme = scheme_from_flags(weights, weights_file, X.p);
  CvPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.center = center;
  plan.grid = make_lambda_grid(lambda_max(S, scheme), grid, ratio);
  CvReport rep = cross_validate(X, plan, scheme);

  JsonWriter j;
  j.begin_object();
  j.key("schema_version").value(kSchemaVersion);
  emit_fit_config(j, "cv", input, false, center, scheme.name());
  j.key("folds").value(folds);
  j.key("grid_size").value(grid);
  j.key("ratio").value(ratio);
  j.key("seed").value(static_cast<unsigned long long>(seed));
  j.end_object();  // config
  j.key("grid").array(rep.grid);
  j.key("fold_loss").begin_array();
  for (auto& row : rep.fold_loss) j.array(row);
  j.end_array();
  j.key("mean_loss").array(rep.mean_loss);
  j.key("se_loss").array(rep.se_loss);
  j.key("selected_index").value(rep.selected_index);
  j.key("selected_lambda").value(rep.selected_lambda);
  j.key("one_se_index").value(rep.one_se_index);
  j.key("one_se_lambda").value(rep.one_se_lambda);
  j.end_object();
  write_text_atomic(out, j.str() + "\n");
  return 0;
}

std::vector<EstimatorKind> parse_estimators(const std::string& spec) {
  std::vector<EstimatorKind> out;
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok == "general") out.push_back(EstimatorKind::HierGeneral);
    else if (tok == "simple") out.push_back(EstimatorKind::HierSimple);
    else if (tok == "group") out.push_back(EstimatorKind::HierGroup);
    else if (tok == "banding") out.push_back(EstimatorKind::BandingOracle);
    else if (tok == "sample") out.push_back(EstimatorKind::SampleCov);
    else throw CLI::ValidationError("--estimators", "unknown estimator: " + tok);
  }
  if (out.empty()) throw CLI::ValidationError("--estimators", "empty estimator list");
  return out;
}

int cmd_simulate(const std::string& model, int K, int p, int n, int reps, const std::string& rule,
                 double fixed_lambda, uint64_t seed, const std::string& estimators,
                 const std::string& custom_cov, const std::string& out) {
  ExperimentConfig cfg;
  if (model == "ma") cfg.model = CovModel::ma(p, K);
  else if (model == "cy") cfg.model = CovModel::cy(p, split_seed(seed, 0xC0FFEE));
  else if (model == "spiked") cfg.model = CovModel::spiked_band(p, K);
  else if (model == "custom") {
    cfg.model.kind = CovModel::Kind::Custom;
    cfg.model.custom = read_sym_matrix(custom_cov);
    cfg.model.p = cfg.model.custom.dim();
  } else {
    throw CLI::ValidationError("--model", "expected ma|cy|spiked|custom");
  }
  cfg.n = n;
  cfg.reps = reps;
  cfg.seed = seed;
  if (rule == "theory") cfg.rule = LambdaRule::Theory;
  else if (rule == "fixed") cfg.rule = LambdaRule::Fixed;
  else if (rule == "cv") cfg.rule = LambdaRule::CrossVal;
  else throw CLI::ValidationError("--lambda-rule", "expected theory|fixed|cv");
  cfg.fixed_lambda = fixed_lambda;
  if (cfg.rule == LambdaRule::Fixed && !(fixed_lambda >= 0))
    throw CLI::ValidationError("--lambda", "fixed rule needs --lambda >= 0");
  cfg.estimators = parse_estimators(estimators);

  SimReport rep = run_experiment(cfg);

  // report.json: deterministic content only (timings go to the CSV)
  JsonWriter j;
  j.begin_object();
  j.key("schema_version").value(kSchemaVersion);
  j.key("config").begin_object();
  j.key("subcommand").value("simulate");
  j.key("model").value(model);
  j.key("K").value(K);
  j.key("p").value(p);
  j.key("n").value(n);
  j.key("reps").value(reps);
  j.key("lambda_rule").value(rule);
  j.key("fixed_lambda").value(fixed_lambda);
  j.key("seed").value(static_cast<unsigned long long>(seed));
  j.key("estimators").value(estimators);
  j.end_object();
  j.key("summaries").begin_array();
  for (const auto& s : rep.summaries) {
    j.begin_object();
    j.key("estimator").value(estimator_name(s.estimator));
    j.key("mean_frob2_per_p").value(s.mean_frob2_per_p);
    j.key("se_frob2_per_p").value(s.se_frob2_per_p);
    j.key("mean_op").value(s.mean_op);
    j.key("se_op").value(s.se_op);
    j.key("k_hat_counts").begin_array();
    for (auto& [k, c] : s.k_hat_counts) {
      j.begin_array();
      j.value(k);
      j.value(c);
      j.end_array();
    }
    j.end_array();
    j.end_object();
  }
  j.end_array();
  j.key("replicates").begin_array();
  for (const auto& r : rep.rows) {
    j.begin_object();
    j.key("rep").value(r.rep);
    j.key("estimator").value(estimator_name(r.estimator));
    j.key("frob2_per_p").value(r.frob2_per_p);
    j.key("op_dist").value(r.op_dist);
    j.key("k_hat").value(r.k_hat);
    j.key("lambda").value(r.lambda);
    j.end_object();
  }
  j.end_array();
  j.end_object();
  write_text_atomic(out, j.str() + "\n");

  std::string csv_path = out;
  if (csv_path.size() > 5 && csv_path.substr(csv_path.size() - 5) == ".json")
    csv_path = csv_path.substr(0, csv_path.size() - 5) + ".csv";
  else
    csv_path += ".csv";
  std::ostringstream os;
  os << "rep,estimator,frob2_per_p,op_dist,k_hat,lambda,seconds\n";
  for (const auto& r : rep.rows)
    os << r.rep << ',' << estimator_name(r.estimator) << ',' << format_double(r.frob2_per_p) << ','
       << format_double(r.op_dist) << ',' << r.k_hat << ',' << format_double(r.lambda) << ','
       << format_double(r.seconds) << '\n';
  write_text_atomic(csv_path, os.str());
  return 0;
}

int cmd_classify(const std::string& train_path, const std::string& labels_path,
                 const std::string& test_path, const std::string& test_labels_path,
                 const std::string& mode_str, const std::string& weights,
                 const std::string& weights_file, bool use_cv, std::vector<double> lambdas,
                 int folds, int grid, uint64_t seed, const std::string& outdir) {
  DataMatrix X = read_data_matrix(train_path);
  std::vector<int> y = read_labels(labels_path);
  DataMatrix T = read_data_matrix(test_path);
  DiscriminantMode mode = mode_str == "qda" ? DiscriminantMode::QDA : DiscriminantMode::LDA;
  WeightScheme scheme = scheme_from_flags(weights, weights_file, X.p);

  TrainOptions opts;
  opts.cov = CovEstimator::Banded;
  if (!use_cv) {
    if (lambdas.empty()) throw CLI::ValidationError("--lambda", "give --lambda per class or --cv");
    opts.lambdas = std::move(lambdas);
  }
  opts.cv_folds = folds;
  opts.cv_grid = grid;
  opts.cv_seed = seed;

  GaussianClassModel model = train(X, y, mode, scheme, opts);
  std::vector<int> pred_train = predict(model, X);
  std::vector<int> pred = predict(model, T);

  std::ostringstream os;
  for (int v : pred) os << v << '\n';
  write_text_atomic(join_path(outdir, "predictions.csv"), os.str());

  JsonWriter j;
  j.begin_object();
  j.key("schema_version").value(kSchemaVersion);
  j.key("config").begin_object();
  j.key("subcommand").value("classify");
  j.key("train").value(train_path);
  j.key("labels").value(labels_path);
  j.key("test").value(test_path);
  j.key("mode").value(mode_str);
  j.key("weights").value(scheme.name());
  j.key("cv").value(use_cv);
  j.key("folds").value(folds);
  j.key("grid").value(grid);
  j.key("seed").value(static_cast<unsigned long long>(seed));
  j.end_object();
  j.key("classes").begin_array();
  for (const auto& c : model.classes) {
    j.begin_object();
    j.key("label").value(c.label);
    j.key("prior").value(c.prior);
    j.key("lambda").value(c.lambda);
    j.end_object();
  }
  j.end_array();
  j.key("train_accuracy").value(accuracy(pred_train, y));
  if (!test_labels_path.empty()) {
    std::vector<int> ty = read_labels(test_labels_path);
    j.key("test_accuracy").value(accuracy(pred, ty));
  }
  j.end_object();
  write_text_atomic(join_path(outdir, "accuracy.json"), j.str() + "\n");
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"hierband: convex banding covariance estimation"};
  app.require_subcommand(1);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit the estimator at one lambda");
  std::string input, weights = "general", weights_file, outdir = ".";
  bool cov_input = false, no_center = false, pd = false;
  double lambda = -1.0, delta = -1.0;
  fit_cmd->add_option("--input", input, "data CSV (rows = observations)")->required();
  fit_cmd->add_option("--lambda", lambda, "tuning parameter, >= 0")->required();
  fit_cmd->add_option("--weights", weights, "group|simple|general");
  fit_cmd->add_option("--weights-file", weights_file, "custom weight table CSV of (l,m,w)");
  fit_cmd->add_flag("--cov-input", cov_input, "input is a precomputed covariance matrix");
  fit_cmd->add_flag("--no-center", no_center, "skip mean-centering");
  fit_cmd->add_flag("--pd", pd, "eigenvalue-floored variant");
  fit_cmd->add_option("--delta", delta, "eigenvalue floor (default 1e-4 * mean diagonal)");
  fit_cmd->add_option("--output-dir", outdir, "where sigma_hat.csv and fit.json go");

  // path
  auto* path_cmd = app.add_subcommand("path", "fits along a descending lambda grid");
  std::string p_input, p_weights = "general", p_weights_file, p_out = "path.csv";
  bool p_cov_input = false, p_no_center = false;
  int p_grid = 50;
  double p_ratio = 0.01;
  path_cmd->add_option("--input", p_input, "data CSV")->required();
  path_cmd->add_option("--grid", p_grid, "number of grid points");
  path_cmd->add_option("--ratio", p_ratio, "grid spans lambda_max down to ratio*lambda_max");
  path_cmd->add_option("--weights", p_weights, "group|simple|general");
  path_cmd->add_option("--weights-file", p_weights_file, "custom weight table CSV");
  path_cmd->add_flag("--cov-input", p_cov_input, "input is a covariance matrix");
  path_cmd->add_flag("--no-center", p_no_center, "skip mean-centering");
  path_cmd->add_option("--out", p_out, "output CSV");

  // cv
  auto* cv_cmd = app.add_subcommand("cv", "cross-validate lambda");
  std::string c_input, c_weights = "general", c_weights_file, c_out = "cv.json";
  bool c_no_center = false;
  int c_folds = 5, c_grid = 50, c_threads = 0;
  double c_ratio = 0.01;
  uint64_t c_seed = 7;
  cv_cmd->add_option("--input", c_input, "data CSV")->required();
  cv_cmd->add_option("--folds", c_folds, "number of folds");
  cv_cmd->add_option("--grid", c_grid, "grid size");
  cv_cmd->add_option("--ratio", c_ratio, "grid ratio");
  cv_cmd->add_option("--seed", c_seed, "fold-assignment seed");
  cv_cmd->add_option("--weights", c_weights, "group|simple|general");
  cv_cmd->add_option("--weights-file", c_weights_file, "custom weight table CSV");
  cv_cmd->add_flag("--no-center", c_no_center, "skip mean-centering");
  cv_cmd->add_option("--threads", c_threads, "parallelism degree (default: machine cores)");
  cv_cmd->add_option("--out", c_out, "output JSON");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo experiment driver");
  std::string s_model = "ma", s_rule = "theory", s_estimators = "general,simple,group,banding,sample";
  std::string s_custom, s_out = "report.json";
  int s_K = 5, s_p = 100, s_n = 100, s_reps = 10, s_threads = 0;
  double s_lambda = -1.0;
  uint64_t s_seed = 0;
  sim_cmd->add_option("--model", s_model, "ma|cy|spiked|custom");
  sim_cmd->add_option("--K", s_K, "model bandwidth parameter");
  sim_cmd->add_option("--p", s_p, "dimension");
  sim_cmd->add_option("--n", s_n, "sample size");
  sim_cmd->add_option("--reps", s_reps, "replicates");
  sim_cmd->add_option("--lambda-rule", s_rule, "theory|fixed|cv");
  sim_cmd->add_option("--lambda", s_lambda, "value for --lambda-rule fixed");
  sim_cmd->add_option("--seed", s_seed, "master seed");
  sim_cmd->add_option("--estimators", s_estimators, "comma list: general,simple,group,banding,sample");
  sim_cmd->add_option("--custom-cov", s_custom, "covariance CSV for --model custom");
  sim_cmd->add_option("--threads", s_threads, "parallelism degree (default: machine cores)");
  sim_cmd->add_option("--out", s_out, "report JSON (CSV written alongside)");

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "QDA/LDA with banded class covariances");
  std::string k_train, k_labels, k_test, k_test_labels, k_mode = "qda", k_weights = "general";
  std::string k_weights_file, k_outdir = ".";
  bool k_cv = false;
  std::vector<double> k_lambdas;
  int k_folds = 5, k_grid = 20;
  uint64_t k_seed = 0;
  cls_cmd->add_option("--train", k_train, "training data CSV")->required();
  cls_cmd->add_option("--labels", k_labels, "training labels CSV")->required();
  cls_cmd->add_option("--test", k_test, "test data CSV")->required();
  cls_cmd->add_option("--test-labels", k_test_labels, "test labels CSV (for accuracy)");
  cls_cmd->add_option("--mode", k_mode, "qda|lda")->check(CLI::IsMember({"qda", "lda"}));
  cls_cmd->add_option("--weights", k_weights, "group|simple|general");
  cls_cmd->add_option("--weights-file", k_weights_file, "custom weight table CSV");
  cls_cmd->add_flag("--cv", k_cv, "cross-validate lambda per class");
  cls_cmd->add_option("--lambda", k_lambdas, "fixed lambda per class");
  cls_cmd->add_option("--folds", k_folds, "CV folds");
  cls_cmd->add_option("--grid", k_grid, "CV grid size");
  cls_cmd->add_option("--seed", k_seed, "CV seed");
  cls_cmd->add_option("--output-dir", k_outdir, "where predictions.csv and accuracy.json go");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit_cmd) {
      if (lambda < 0) {
        std::cerr << "fit: --lambda must be >= 0\n";
        return 2;
      }
      if (pd && delta != -1.0 && !(delta > 0)) {
        std::cerr << "fit: --delta must be positive\n";
        return 2;
      }
      return cmd_fit(input, cov_input, !no_center, lambda, weights, weights_file, pd, delta, outdir);
    }
    if (*path_cmd) {
      if (p_grid < 1 || !(p_ratio > 0) || p_ratio > 1) {
        std::cerr << "path: need --grid >= 1 and --ratio in (0,1]\n";
        return 2;
      }
      return cmd_path(p_input, p_cov_input, !p_no_center, p_grid, p_ratio, p_weights, p_weights_file, p_out);
    }
    if (*cv_cmd) {
      if (c_folds < 2 || c_grid < 1) {
        std::cerr << "cv: need --folds >= 2 and --grid >= 1\n";
        return 2;
      }
      if (c_threads > 0) omp_set_num_threads(c_threads);
      return cmd_cv(c_input, !c_no_center, c_folds, c_grid, c_ratio, c_seed, c_weights, c_weights_file, c_out);
    }
    if (*sim_cmd) {
      if (s_reps < 1 || s_p < 2 || s_n < 1) {
        std::cerr << "simulate: need --reps >= 1, --p >= 2, --n >= 1\n";
        return 2;
      }
      if (s_rule == "fixed" && s_lambda < 0) {
        std::cerr << "simulate: --lambda-rule fixed needs --lambda >= 0\n";
        return 2;
      }
      if (s_threads > 0) omp_set_num_threads(s_threads);
      return cmd_simulate(s_model, s_K, s_p, s_n, s_reps, s_rule, s_lambda, s_seed, s_estimators,
                          s_custom, s_out);
    }
    if (*cls_cmd) {
      for (double l : k_lambdas)
        if (l < 0) {
          std::cerr << "classify: --lambda must be >= 0\n";
          return 2;
        }
      return cmd_classify(k_train, k_labels, k_test, k_test_labels, k_mode, k_weights, k_weights_file,
                          k_cv, k_lambdas, k_folds, k_grid, k_seed, k_outdir);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace hierband
