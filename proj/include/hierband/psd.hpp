#pragma once

#include "hierband/solver.hpp"

namespace hierband {

struct PsdFitConfig {
  double lambda;
  WeightScheme scheme;
  double delta;            // eigenvalue floor, > 0
  int max_outer = 500;
  double conv_tol = -1.0;  // <0 means 1e-9 * p
  double root_tol = 1e-12;
  double zero_tol = 1e-14;
  double gap_rtol = 1e-9;

  PsdFitConfig(double lam, WeightScheme s, double d) : lambda(lam), scheme(std::move(s)), delta(d) {
    if (d <= 0) throw std::invalid_argument("PsdFitConfig: delta must be positive");
  }
};

struct PsdFitResult {
  SymMatrix sigma_tilde;
  double min_eig = 0.0;
  int outer_iters = 0;
  bool converged = false;
  bool coincides_with_unconstrained = false;
  double primal_obj = 0.0;
  // Final subdiagonal-threshold pass (on S + lambda*C); its taper/nu/k_hat
  // describe the banded component of the estimate.
  FitResult threshold_fit;
};

/// Scale-aware default floor: 1e-4 * mean(diag(S)).
double default_delta(const SymMatrix& S);

/// Spectral step of the constrained dual: eigendecompose M = U D U^T and
/// return U [D + delta I]_+ U^T (this is lambda*C_hat).
SymMatrix psd_project_dual(const SymMatrix& M, double delta);

/// The eigenvalue-floored estimator: alternates the subdiagonal-threshold
/// pass on S + lambda*C with the spectral update of C until the iterates
/// settle.  When the unconstrained fit already clears the floor it is
/// returned as-is with the coincides flag set.
PsdFitResult fit_psd(const SymMatrix& S, const PsdFitConfig& cfg);

}  // namespace hierband
