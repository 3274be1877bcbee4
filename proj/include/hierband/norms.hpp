#pragma once

#include "hierband/sym_matrix.hpp"
#include "hierband/weights.hpp"

namespace hierband {

/// ||M_{s_m}||_2, both mirror copies counted.
double subdiag_norm(const SymMatrix& M, int m);

double frobenius_dist(const SymMatrix& A, const SymMatrix& B);

/// Largest absolute eigenvalue of A - B.  Uses a full symmetric
/// eigendecomposition for p <= 512 and power iteration (tol 1e-10, at most
/// 10000 iterations) beyond that.
double operator_dist(const SymMatrix& A, const SymMatrix& B);

/// Largest absolute eigenvalue of M.
double operator_norm(const SymMatrix& M);

/// ||M||_{2,1} = sum_l w_l ||M_{s_l}||_2  (diagonal excluded).
double norm_21(const SymMatrix& M, const WeightScheme& w);

/// ||M||_{2,inf} = max_l ||M_{s_l}||_2 / w_l  (diagonal excluded).
double norm_2inf(const SymMatrix& M, const WeightScheme& w);

/// The hierarchical penalty ||M||*_{2,1} = sum_l ||(W^{(l)} * M)_{g_l}||_2.
double hier_penalty(const SymMatrix& M, const WeightScheme& w);

/// Same, but from precomputed subdiagonal norms b[m-1] = ||M_{s_m}||_2 and
/// per-subdiagonal scale factors (entries of M assumed = scale[m-1]*base).
double hier_penalty_scaled(const std::vector<double>& b, const std::vector<double>& scale, const WeightScheme& w);

double min_eigenvalue(const SymMatrix& M);

}  // namespace hierband
