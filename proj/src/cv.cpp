#include "hierband/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hierband/kernels.hpp"
#include "hierband/norms.hpp"
#include "hierband/rng.hpp"
#include "hierband/solver.hpp"

namespace hierband {

std::vector<int> fold_assignment(int n, int folds, uint64_t seed) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(split_seed(seed, 0x666f6c64 /* "fold" */));
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  std::vector<int> fold(n);
  for (int i = 0; i < n; ++i) fold[perm[i]] = i % folds;
  return fold;
}

namespace {

// invert=false selects fold==which; invert=true selects the complement.
DataMatrix take_rows(const DataMatrix& X, const std::vector<int>& fold, int which, bool invert) {
  int count = 0;
  for (int f : fold) count += ((f == which) != invert) ? 1 : 0;
  DataMatrix out(count, X.p);
  int r = 0;
  for (int i = 0; i < X.n; ++i) {
    if ((fold[i] == which) != invert) {
      for (int j = 0; j < X.p; ++j) out.at(r, j) = X.at(i, j);
      ++r;
    }
  }
  return out;
}

}  // namespace

CvReport cross_validate(const DataMatrix& X, const CvPlan& plan, const WeightScheme& scheme) {
  if (plan.folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
  if (X.n < plan.folds) throw std::invalid_argument("cross_validate: n < folds");
  if (plan.grid.empty()) throw std::invalid_argument("cross_validate: empty grid");
  for (size_t i = 1; i < plan.grid.size(); ++i)
    if (plan.grid[i] > plan.grid[i - 1])
      throw std::invalid_argument("cross_validate: grid must be sorted descending");

  const int G = static_cast<int>(plan.grid.size());
  std::vector<int> fold = fold_assignment(X.n, plan.folds, plan.seed);

  CvReport rep;
  rep.grid = plan.grid;
  rep.fold_loss.assign(plan.folds, std::vector<double>(G, 0.0));

#pragma omp parallel for schedule(dynamic)
  for (int f = 0; f < plan.folds; ++f) {
    DataMatrix train = take_rows(X, fold, f, true);
    DataMatrix test = take_rows(X, fold, f, false);
    SymMatrix s_train = sample_covariance(train, plan.center);
    SymMatrix s_test = sample_covariance(test, plan.center);
    for (int g = 0; g < G; ++g) {
      FitConfig cfg(plan.grid[g], scheme);
      FitResult fit_res = fit(s_train, cfg);
      double d = frobenius_dist(fit_res.sigma_hat, s_test);
      rep.fold_loss[f][g] = d * d;
    }
  }

  rep.mean_loss.assign(G, 0.0);
  rep.se_loss.assign(G, 0.0);
  for (int g = 0; g < G; ++g) {
    double s = 0.0;
    for (int f = 0; f < plan.folds; ++f) s += rep.fold_loss[f][g];
    double mean = s / plan.folds;
    double v = 0.0;
    for (int f = 0; f < plan.folds; ++f) {
      double d = rep.fold_loss[f][g] - mean;
      v += d * d;
    }
    rep.mean_loss[g] = mean;
    rep.se_loss[g] = plan.folds > 1 ? std::sqrt(v / (plan.folds - 1) / plan.folds) : 0.0;
  }

  // argmin with ties toward larger lambda == smaller index (grid descending)
  int best = 0;
  for (int g = 1; g < G; ++g)
    if (rep.mean_loss[g] < rep.mean_loss[best]) best = g;
  rep.selected_index = best;
  rep.selected_lambda = plan.grid[best];

  double cutoff = rep.mean_loss[best] + rep.se_loss[best];
  int one_se = best;
  for (int g = 0; g <= best; ++g) {
    if (rep.mean_loss[g] <= cutoff) {
      one_se = g;
      break;
    }
  }
  rep.one_se_index = one_se;
  rep.one_se_lambda = plan.grid[one_se];
  return rep;
}

}  // namespace hierband
