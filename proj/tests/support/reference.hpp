#pragma once

// Test-only reference implementations, kept deliberately naive and
// independent of the production solver's scale-space bookkeeping:
//
//  * dense_bcd_sweep     — one literal blockwise pass with materialized
//                          dual matrices A^{(l)} (Theorem-style recursion)
//  * admm_prox_oracle    — consensus ADMM on the primal with one y-block per
//                          level; plain group soft-thresholding only
//  * admm_psd_oracle     — same with an extra spectral-floor block
//  * subgradient_oracle  — projected subgradient descent with diminishing
//                          steps, best-iterate tracking
//  * solve_nu_gridscan   — grid-bracketed bisection root of h_l

#include <cstdint>
#include <vector>

#include "hierband/solver.hpp"
#include "hierband/sym_matrix.hpp"
#include "hierband/weights.hpp"

namespace hierband::testref {

/// One BCD sweep over levels 1..p-1 updating the dense dual blocks A[l-1]
/// in place; returns the primal iterate S - lambda * sum W^{(l)} * A^{(l)}.
SymMatrix dense_bcd_sweep(const SymMatrix& S, double lambda, const WeightScheme& w,
                          std::vector<SymMatrix>& A);

/// Largest entrywise |change| a sweep makes to the dual blocks.
double dense_bcd_sweep_change(const SymMatrix& S, double lambda, const WeightScheme& w,
                              std::vector<SymMatrix>& A);

SymMatrix admm_prox_oracle(const SymMatrix& S, double lambda, const WeightScheme& w,
                           int max_iters = 200000, double tol = 1e-11);

SymMatrix admm_psd_oracle(const SymMatrix& S, double lambda, double delta, const WeightScheme& w,
                          int max_iters = 200000, double tol = 1e-10);

SymMatrix subgradient_oracle(const SymMatrix& S, double lambda, const WeightScheme& w,
                             int iters = 200000);

double solve_nu_gridscan(int level, const std::vector<double>& rnorms, const WeightScheme& w,
                         double lambda);

/// Primal objective of the banding problem.
double primal_objective(const SymMatrix& sigma, const SymMatrix& S, double lambda,
                        const WeightScheme& w);

// Deterministic random test instances.
SymMatrix random_sym(int p, uint64_t seed, double diag_boost = 1.0);
SymMatrix random_covariance(int p, int n, uint64_t seed);
double max_abs_diff(const SymMatrix& a, const SymMatrix& b);

}  // namespace hierband::testref
