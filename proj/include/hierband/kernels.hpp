#pragma once

#include <vector>

#include "hierband/sym_matrix.hpp"

// OpenMP-parallel kernels for the O(n p^2) / O(p^2) inner loops, together
// with serial reference implementations under hierband::serial.  Each
// parallel kernel partitions its output so that every entry is produced by
// exactly one thread with the same accumulation order as the serial code;
// results are therefore bitwise identical, which the tests assert.

namespace hierband {

/// S = n^{-1} sum_i (x_i - xbar)(x_i - xbar)^T.  Set center=false to skip
/// the mean subtraction (second-moment matrix).
SymMatrix sample_covariance(const DataMatrix& X, bool center = true);

/// Euclidean norms of all subdiagonal levels: out[m-1] = ||M_{s_m}||_2 for
/// m = 1..p (level p is the main diagonal).  Off-diagonal levels count both
/// mirror copies, so |s_m| = 2m entries contribute.
std::vector<double> subdiag_norms(const SymMatrix& M);

/// y = M x for symmetric M.
void symv(const SymMatrix& M, const std::vector<double>& x, std::vector<double>& y);

/// Out[s_m] = coeff[m-1] * S[s_m] for m = 1..p-1; diagonal copied from S.
SymMatrix scale_subdiagonals(const SymMatrix& S, const std::vector<double>& coeff);

namespace serial {
SymMatrix sample_covariance(const DataMatrix& X, bool center = true);
std::vector<double> subdiag_norms(const SymMatrix& M);
void symv(const SymMatrix& M, const std::vector<double>& x, std::vector<double>& y);
SymMatrix scale_subdiagonals(const SymMatrix& S, const std::vector<double>& coeff);
}  // namespace serial

}  // namespace hierband
