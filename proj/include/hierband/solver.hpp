#pragma once

#include <span>
#include <vector>

#include "hierband/sym_matrix.hpp"
#include "hierband/weights.hpp"

namespace hierband {

struct FitConfig {
  double lambda;
  WeightScheme scheme;
  double root_tol = 1e-12;  // relative tolerance on |h - lambda^2|
  double zero_tol = 1e-14;  // taper below this reports an exact zero
  double gap_rtol = 1e-9;   // duality-gap stopping rule, relative to 1+|primal|
  int max_sweeps = 10000;

  FitConfig(double lam, WeightScheme s) : lambda(lam), scheme(std::move(s)) {}
};

struct FitResult {
  SymMatrix sigma_hat;
  int k_hat = 0;
  std::vector<double> nu;     // nu[l-1] for levels l = 1..p-1
  std::vector<double> taper;  // taper[m-1] in [0,1]: sigma_hat_{s_m} = taper * S_{s_m}
  double primal_obj = 0.0;
  double dual_gap = 0.0;
  int sweeps = 0;
};

/// Dual blocks in their per-subdiagonal scale representation,
/// A^{(l)}_{s_m} = block_scale[l-1][m-1] * S_{s_m}, plus the feasibility
/// norms ||A^{(l)}_{g_l}||_2 used as an optimality certificate.
struct DualState {
  std::vector<std::vector<double>> block_scale;
  std::vector<double> feasibility;
  double gap = 0.0;
};

/// h_l(nu) = sum_{m<=l} w_{lm}^2 r_m^2 / (w_{lm}^2 + nu)^2 with
/// r = rnorms (residual subdiagonal norms, size l).  Requires
/// w_{lm}^2 + nu > 0 for every active term.
double h_eval(double nu, int level, std::span<const double> rnorms, const WeightScheme& w);

/// The multiplier of the level-l ellipsoid projection: the root of
/// h_l(nu) = lambda^2.  Nonpositive return means the level is zeroed.
/// Uses the closed form when a single weighted term is active, otherwise
/// bracketed bisection switching to safeguarded Newton.
double solve_nu(int level, std::span<const double> rnorms, const WeightScheme& w, double lambda,
                double root_tol = 1e-12);

/// The convex banding estimator: blockwise coordinate descent on the dual,
/// swept until the duality gap certifies optimality.  For the group-lasso
/// and basic hierarchical weights a single forward pass is exact; the
/// general weights take a handful of sweeps.
FitResult fit(const SymMatrix& S, const FitConfig& cfg, DualState* dual = nullptr);

/// Fast path for the basic hierarchical weights: iterated group
/// soft-thresholding of the corner triangles, outermost first.
FitResult fit_simple(const SymMatrix& S, double lambda, double zero_tol = 1e-14);

/// Smallest lambda at which the estimate is fully diagonal:
/// max_l ||S_{s_l}||_2 / w_l.  Returns 0 for p = 1.
double lambda_max(const SymMatrix& S, const WeightScheme& w);

std::vector<double> taper_of(const FitResult& fit);

/// Apply a Toeplitz taper: out_{s_m} = taper[m-1] * S_{s_m}, diagonal kept.
SymMatrix reconstruct(const SymMatrix& S, const std::vector<double>& taper);

/// Plain banding baseline: zero everything at distance > K from the diagonal.
SymMatrix fixed_band(const SymMatrix& S, int K);

/// Geometric grid of `count` values from lambda_max down to ratio*lambda_max.
std::vector<double> make_lambda_grid(double lmax, int count, double ratio);

/// One independent fit per grid value (grid must be sorted descending).
std::vector<FitResult> path(const SymMatrix& S, const std::vector<double>& grid, const WeightScheme& w);

}  // namespace hierband
