#include "hierband/sim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "hierband/cv.hpp"
#include "hierband/kernels.hpp"
#include "hierband/norms.hpp"
#include "hierband/rng.hpp"
#include "hierband/solver.hpp"

namespace hierband {

namespace {

SymMatrix make_ma(int p, int K) {
  if (K < 1 || K > p - 1) throw std::invalid_argument("make_cov: MA needs 1 <= K <= p-1");
  SymMatrix S(p);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) {
      int d = k - j;
      S.set(j, k, d <= K ? 1.0 - static_cast<double>(d) / K : 0.0);
    }
  return S;
}

SymMatrix make_cy(int p, uint64_t seed, int* resamples) {
  int tries = 0;
  for (;; ++tries) {
    Rng rng(split_seed(seed + tries, 0xc7));
    SymMatrix S(p);
    for (int j = 0; j < p; ++j) {
      S.set(j, j, 1.0);
      for (int k = j + 1; k < p; ++k) {
        double d = k - j;
        S.set(j, k, 0.6 * rng.uniform() / (d * d));
      }
    }
    if (min_eigenvalue(S) >= -1e-10) {
      if (resamples) *resamples = tries;
      return S;
    }
    if (tries > 64) throw numerical_error("make_cov: CY draws persistently non-PSD");
  }
}

SymMatrix make_spiked(int p, int K) {
  if (K < 0 || K > p - 1) throw std::invalid_argument("make_cov: SpikedBand needs 0 <= K <= p-1");
  SymMatrix B(p);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k)
      if (k - j <= K) B.set(j, k, 0.8);
  // B + cI shifts the spectrum exactly, so the calibration is a single solve.
  double c = 0.1 - min_eigenvalue(B);
  for (int j = 0; j < p; ++j) B.set(j, j, B(j, j) + c);
  return B;
}

}  // namespace

SymMatrix make_cov(const CovModel& model, int* cy_resamples) {
  if (cy_resamples) *cy_resamples = 0;
  switch (model.kind) {
    case CovModel::Kind::MA:
      return make_ma(model.p, model.K);
    case CovModel::Kind::CY:
      return make_cy(model.p, model.seed, cy_resamples);
    case CovModel::Kind::SpikedBand:
      return make_spiked(model.p, model.K);
    case CovModel::Kind::Custom:
      if (model.custom.dim() < 1) throw std::invalid_argument("make_cov: custom matrix not set");
      return model.custom;
  }
  throw std::invalid_argument("make_cov: unknown kind");
}

DataMatrix sample_gaussian(const SymMatrix& Sigma, int n, uint64_t seed) {
  const int p = Sigma.dim();
  if (n < 1) throw std::invalid_argument("sample_gaussian: n must be >= 1");
  Eigen::Map<const Eigen::MatrixXd> sig(Sigma.data(), p, p);

  Eigen::MatrixXd L;
  bool ok = false;
  for (double jitter : {0.0, 1e-14, 1e-12, 1e-10}) {
    Eigen::MatrixXd m = sig;
    if (jitter > 0) m.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      L = llt.matrixL();
      ok = true;
      break;
    }
  }
  if (!ok) throw numerical_error("sample_gaussian: covariance is not PSD within jitter tolerance");

  Rng rng(seed);
  DataMatrix Z(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) Z.at(i, j) = rng.normal();

  DataMatrix X(n, p);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      double s = 0.0;
      for (int k = 0; k <= j; ++k) s += L(j, k) * Z.at(i, k);
      X.at(i, j) = s;
    }
  }
  return X;
}

std::string estimator_name(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::HierGeneral: return "hier_general";
    case EstimatorKind::HierSimple: return "hier_simple";
    case EstimatorKind::HierGroup: return "hier_group";
    case EstimatorKind::BandingOracle: return "banding_oracle";
    case EstimatorKind::SampleCov: return "sample_cov";
  }
  return "?";
}

namespace {

double resolve_lambda(const ExperimentConfig& cfg, const DataMatrix& X, const SymMatrix& S,
                      const WeightScheme& scheme) {
  switch (cfg.rule) {
    case LambdaRule::Fixed:
      return cfg.fixed_lambda;
    case LambdaRule::Theory:
      return 2.0 * std::sqrt(std::log(static_cast<double>(cfg.model.p)) / cfg.n);
    case LambdaRule::CrossVal: {
      CvPlan plan;
      plan.folds = cfg.cv_folds;
      plan.seed = cfg.seed;
      plan.grid = make_lambda_grid(lambda_max(S, scheme), cfg.cv_grid, 0.01);
      return cross_validate(X, plan, scheme).selected_lambda;
    }
  }
  return 0.0;
}

}  // namespace

SimReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("run_experiment: reps must be >= 1");
  SymMatrix truth = make_cov(cfg.model);
  const int p = truth.dim();
  const int ne = static_cast<int>(cfg.estimators.size());

  SimReport report;
  report.config = cfg;
  report.rows.assign(static_cast<size_t>(cfg.reps) * ne, ReplicateRow{});

  std::vector<std::string> errors(cfg.reps);

#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < cfg.reps; ++rep) {
    try {
      DataMatrix X = sample_gaussian(truth, cfg.n, split_seed(cfg.seed, rep));
      SymMatrix S = sample_covariance(X);
      for (int e = 0; e < ne; ++e) {
        EstimatorKind kind = cfg.estimators[e];
        ReplicateRow row;
        row.rep = rep;
        row.estimator = kind;
        auto t0 = std::chrono::steady_clock::now();
        SymMatrix est(p);
        switch (kind) {
          case EstimatorKind::HierGeneral:
          case EstimatorKind::HierSimple:
          case EstimatorKind::HierGroup: {
            WeightScheme scheme = kind == EstimatorKind::HierGeneral ? WeightScheme::general_hier(p)
                                  : kind == EstimatorKind::HierSimple ? WeightScheme::basic_hier(p)
                                                                      : WeightScheme::group_lasso(p);
            double lam = resolve_lambda(cfg, X, S, scheme);
            FitConfig fc(lam, scheme);
            FitResult f = fit(S, fc);
            est = f.sigma_hat;
            row.k_hat = f.k_hat;
            row.lambda = lam;
            break;
          }
          case EstimatorKind::BandingOracle: {
            // oracle-tuned: best bandwidth against the known truth
            double best = std::numeric_limits<double>::infinity();
            int bestK = 0;
            for (int K = 0; K <= p - 1; ++K) {
              SymMatrix cand = fixed_band(S, K);
              double d = frobenius_dist(cand, truth);
              if (d < best) {
                best = d;
                bestK = K;
                est = cand;
              }
            }
            row.k_hat = bestK;
            row.lambda = bestK;
            break;
          }
          case EstimatorKind::SampleCov:
            est = S;
            row.k_hat = -1;
            break;
        }
        double fd = frobenius_dist(est, truth);
        row.frob2_per_p = fd * fd / p;
        row.op_dist = operator_dist(est, truth);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows[static_cast<size_t>(rep) * ne + e] = row;
      }
    } catch (const std::exception& ex) {
      errors[rep] = ex.what();
    }
  }

  for (int rep = 0; rep < cfg.reps; ++rep)
    if (!errors[rep].empty())
      throw numerical_error("run_experiment: replicate " + std::to_string(rep) + " failed: " + errors[rep]);

  // aggregate in replicate-index order
  for (int e = 0; e < ne; ++e) {
    EstimatorSummary s;
    s.estimator = cfg.estimators[e];
    double sf = 0, so = 0, st = 0;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const ReplicateRow& r = report.rows[static_cast<size_t>(rep) * ne + e];
      sf += r.frob2_per_p;
      so += r.op_dist;
      st += r.seconds;
    }
    s.mean_frob2_per_p = sf / cfg.reps;
    s.mean_op = so / cfg.reps;
    s.mean_seconds = st / cfg.reps;
    double vf = 0, vo = 0;
    std::map<int, int> khist;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const ReplicateRow& r = report.rows[static_cast<size_t>(rep) * ne + e];
      vf += (r.frob2_per_p - s.mean_frob2_per_p) * (r.frob2_per_p - s.mean_frob2_per_p);
      vo += (r.op_dist - s.mean_op) * (r.op_dist - s.mean_op);
      if (r.k_hat >= 0) ++khist[r.k_hat];
    }
    if (cfg.reps > 1) {
      s.se_frob2_per_p = std::sqrt(vf / (cfg.reps - 1) / cfg.reps);
      s.se_op = std::sqrt(vo / (cfg.reps - 1) / cfg.reps);
    }
    s.k_hat_counts.assign(khist.begin(), khist.end());
    report.summaries.push_back(std::move(s));
  }
  return report;
}

TwoClassData make_two_class(int p, int K, int n_train_per_class, int n_test_per_class, double shift,
                            int shift_coords, uint64_t seed) {
  SymMatrix sigma = make_cov(CovModel::ma(p, K));
  TwoClassData d;
  d.train_x = DataMatrix(2 * n_train_per_class, p);
  d.test_x = DataMatrix(2 * n_test_per_class, p);
  d.train_y.assign(2 * n_train_per_class, 0);
  d.test_y.assign(2 * n_test_per_class, 0);

  auto fill = [&](DataMatrix& X, std::vector<int>& y, int n_per_class, uint64_t sub) {
    for (int cls = 0; cls < 2; ++cls) {
      DataMatrix Z = sample_gaussian(sigma, n_per_class, split_seed(seed, 2 * sub + cls));
      for (int i = 0; i < n_per_class; ++i) {
        int r = cls * n_per_class + i;
        y[r] = cls;
        for (int j = 0; j < p; ++j) {
          double mu = (cls == 1 && j < shift_coords) ? shift : 0.0;
          X.at(r, j) = Z.at(i, j) + mu;
        }
      }
    }
  };
  fill(d.train_x, d.train_y, n_train_per_class, 0);
  fill(d.test_x, d.test_y, n_test_per_class, 1);
  return d;
}

}  // namespace hierband
