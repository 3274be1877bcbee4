#pragma once

#include <cstdint>
#include <vector>

#include "hierband/sym_matrix.hpp"
#include "hierband/weights.hpp"

namespace hierband {

struct CvPlan {
  int folds = 5;
  std::vector<double> grid;  // descending lambdas
  uint64_t seed = 0;
  bool center = true;
};

struct CvReport {
  std::vector<double> grid;
  std::vector<std::vector<double>> fold_loss;  // [fold][grid index]
  std::vector<double> mean_loss;
  std::vector<double> se_loss;  // standard error over folds, per grid point
  int selected_index = 0;
  double selected_lambda = 0.0;
  int one_se_index = 0;
  double one_se_lambda = 0.0;
};

/// Seeded fold assignment, validation loss = ||Sigma_hat(train) - S_test||_F^2.
/// Ties in the mean-loss argmin go to the larger (sparser) lambda; the
/// one-standard-error alternative is the largest lambda within one SE of the
/// minimum.  (fold, lambda) fits run in parallel; the report is reduced in
/// grid order and is a pure function of (X, plan, scheme).
CvReport cross_validate(const DataMatrix& X, const CvPlan& plan, const WeightScheme& scheme);

/// Deterministic fold labels in [0, folds) for each of the n rows.
std::vector<int> fold_assignment(int n, int folds, uint64_t seed);

}  // namespace hierband
