#pragma once

#include <vector>

#include "hierband/cv.hpp"
#include "hierband/sym_matrix.hpp"
#include "hierband/weights.hpp"

namespace hierband {

enum class DiscriminantMode { QDA, LDA };
enum class CovEstimator { Banded, Sample };

struct ClassStats {
  int label = 0;
  double prior = 0.0;
  std::vector<double> mean;
  double lambda = 0.0;  // tuning value used for this class (0 for Sample)
};

/// Gaussian classifier with banded (or plain sample) class covariances.
/// QDA keeps one covariance per class; LDA pools the per-class banded
/// estimates with (n_k - 1) weights.  Log-densities are evaluated through
/// Cholesky solves; a covariance that fails to factor is refit with the
/// eigenvalue floor.
struct GaussianClassModel {
  DiscriminantMode mode = DiscriminantMode::QDA;
  std::vector<ClassStats> classes;
  // Lower Cholesky factors of the class covariances (shared one for LDA)
  // and their log-determinants; filled by train().
  std::vector<std::vector<double>> chol;  // per class (single entry for LDA), p*p row-major lower
  std::vector<double> log_det;
  int p = 0;
};

struct TrainOptions {
  CovEstimator cov = CovEstimator::Banded;
  std::vector<double> lambdas;  // per class; empty => cross-validate
  int cv_folds = 5;
  int cv_grid = 20;
  uint64_t cv_seed = 0;
};

GaussianClassModel train(const DataMatrix& X, const std::vector<int>& y, DiscriminantMode mode,
                         const WeightScheme& scheme, const TrainOptions& opts);

/// Per-class log posterior (up to the shared constant) for one observation.
std::vector<double> log_posteriors(const GaussianClassModel& model, const double* x);

std::vector<int> predict(const GaussianClassModel& model, const DataMatrix& X);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace hierband
