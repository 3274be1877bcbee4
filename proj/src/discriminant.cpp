#include "hierband/discriminant.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hierband/kernels.hpp"
#include "hierband/norms.hpp"
#include "hierband/psd.hpp"
#include "hierband/solver.hpp"

namespace hierband {

namespace {

struct CholFactor {
  std::vector<double> L;  // p*p row-major, lower triangle
  double log_det = 0.0;   // of the covariance (2 * sum log diag(L))
};

// Factor the covariance; if it is numerically singular, refit with the
// eigenvalue floor and factor that instead.
CholFactor factor_or_floor(SymMatrix& cov, double lambda, const WeightScheme& scheme) {
  const int p = cov.dim();
  Eigen::Map<const Eigen::MatrixXd> m(cov.data(), p, p);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    PsdFitConfig pcfg(lambda, scheme, default_delta(cov));
    PsdFitResult r = fit_psd(cov, pcfg);
    cov = r.sigma_tilde;
    Eigen::Map<const Eigen::MatrixXd> m2(cov.data(), p, p);
    llt.compute(m2);
    if (llt.info() != Eigen::Success) throw numerical_error("discriminant: covariance not PD after floor refit");
  }
  CholFactor f;
  Eigen::MatrixXd L = llt.matrixL();
  f.L.assign(static_cast<size_t>(p) * p, 0.0);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j <= i; ++j) f.L[static_cast<size_t>(i) * p + j] = L(i, j);
  for (int i = 0; i < p; ++i) f.log_det += 2.0 * std::log(L(i, i));
  return f;
}

DataMatrix class_rows(const DataMatrix& X, const std::vector<int>& y, int label) {
  int count = 0;
  for (int v : y) count += v == label;
  DataMatrix out(count, X.p);
  int r = 0;
  for (int i = 0; i < X.n; ++i)
    if (y[i] == label) {
      for (int j = 0; j < X.p; ++j) out.at(r, j) = X.at(i, j);
      ++r;
    }
  return out;
}

double pick_lambda(const DataMatrix& Xk, const SymMatrix& Sk, const WeightScheme& scheme,
                   const TrainOptions& opts, size_t class_index) {
  if (!opts.lambdas.empty()) {
    if (class_index >= opts.lambdas.size())
      throw std::invalid_argument("train: need one lambda per class");
    return opts.lambdas[class_index];
  }
  CvPlan plan;
  plan.folds = opts.cv_folds;
  plan.seed = opts.cv_seed;
  plan.grid = make_lambda_grid(lambda_max(Sk, scheme), opts.cv_grid, 0.01);
  return cross_validate(Xk, plan, scheme).selected_lambda;
}

}  // namespace

GaussianClassModel train(const DataMatrix& X, const std::vector<int>& y, DiscriminantMode mode,
                         const WeightScheme& scheme, const TrainOptions& opts) {
  if (static_cast<int>(y.size()) != X.n) throw std::invalid_argument("train: labels size mismatch");
  std::set<int> labels(y.begin(), y.end());
  if (labels.size() < 2) throw std::invalid_argument("train: need at least 2 classes");

  GaussianClassModel model;
  model.mode = mode;
  model.p = X.p;

  std::vector<SymMatrix> class_cov;
  std::vector<int> class_n;
  size_t ci = 0;
  for (int label : labels) {
    DataMatrix Xk = class_rows(X, y, label);
    if (Xk.n < 2) throw std::invalid_argument("train: class " + std::to_string(label) + " has fewer than 2 samples");

    ClassStats st;
    st.label = label;
    st.prior = static_cast<double>(Xk.n) / X.n;
    st.mean.assign(X.p, 0.0);
    for (int i = 0; i < Xk.n; ++i)
      for (int j = 0; j < X.p; ++j) st.mean[j] += Xk.at(i, j);
    for (int j = 0; j < X.p; ++j) st.mean[j] /= Xk.n;

    SymMatrix Sk = sample_covariance(Xk);
    if (mode == DiscriminantMode::LDA) {
      // the pooled formula uses the (n_k - 1)-normalized class matrices
      double unb = static_cast<double>(Xk.n) / (Xk.n - 1);
      for (size_t i = 0; i < static_cast<size_t>(X.p) * X.p; ++i) Sk.data()[i] *= unb;
    }

    SymMatrix cov = Sk;
    if (opts.cov == CovEstimator::Banded) {
      st.lambda = pick_lambda(Xk, Sk, scheme, opts, ci);
      FitConfig cfg(st.lambda, scheme);
      cov = fit(Sk, cfg).sigma_hat;
    }
    class_cov.push_back(std::move(cov));
    class_n.push_back(Xk.n);
    model.classes.push_back(std::move(st));
    ++ci;
  }

  if (mode == DiscriminantMode::QDA) {
    for (size_t k = 0; k < class_cov.size(); ++k) {
      CholFactor f = factor_or_floor(class_cov[k], model.classes[k].lambda, scheme);
      model.chol.push_back(std::move(f.L));
      model.log_det.push_back(f.log_det);
    }
  } else {
    SymMatrix pooled(X.p, 0.0);
    int denom = X.n - static_cast<int>(class_cov.size());
    for (size_t k = 0; k < class_cov.size(); ++k) {
      double wk = static_cast<double>(class_n[k] - 1) / denom;
      for (size_t i = 0; i < static_cast<size_t>(X.p) * X.p; ++i)
        pooled.data()[i] += wk * class_cov[k].data()[i];
    }
    CholFactor f = factor_or_floor(pooled, 0.0, scheme);
    model.chol.push_back(std::move(f.L));
    model.log_det.push_back(f.log_det);
  }
  return model;
}

std::vector<double> log_posteriors(const GaussianClassModel& model, const double* x) {
  const int p = model.p;
  const size_t nc = model.classes.size();
  std::vector<double> scores(nc);
  std::vector<double> z(p), v(p);
  for (size_t k = 0; k < nc; ++k) {
    const ClassStats& st = model.classes[k];
    const std::vector<double>& L = model.mode == DiscriminantMode::QDA ? model.chol[k] : model.chol[0];
    double log_det = model.mode == DiscriminantMode::QDA ? model.log_det[k] : model.log_det[0];
    for (int j = 0; j < p; ++j) z[j] = x[j] - st.mean[j];
    // forward solve L v = z
    for (int i = 0; i < p; ++i) {
      double s = z[i];
      const double* row = L.data() + static_cast<size_t>(i) * p;
      for (int j = 0; j < i; ++j) s -= row[j] * v[j];
      v[i] = s / row[i];
    }
    double quad = 0.0;
    for (int i = 0; i < p; ++i) quad += v[i] * v[i];
    scores[k] = std::log(st.prior) - 0.5 * log_det - 0.5 * quad;
  }
  return scores;
}

std::vector<int> predict(const GaussianClassModel& model, const DataMatrix& X) {
  if (X.p != model.p) throw std::invalid_argument("predict: dimension mismatch");
  std::vector<int> out(X.n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < X.n; ++i) {
    std::vector<double> s = log_posteriors(model, &X.x[static_cast<size_t>(i) * X.p]);
    size_t best = 0;
    for (size_t k = 1; k < s.size(); ++k)
      if (s[k] > s[best]) best = k;  // ties stay with the lower class index
    out[i] = model.classes[best].label;
  }
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("accuracy: size mismatch");
  int ok = 0;
  for (size_t i = 0; i < predicted.size(); ++i) ok += predicted[i] == truth[i];
  return static_cast<double>(ok) / predicted.size();
}

}  // namespace hierband
