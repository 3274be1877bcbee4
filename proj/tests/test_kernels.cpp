#include <doctest.h>

#include "hierband/kernels.hpp"
#include "hierband/rng.hpp"
#include "support/reference.hpp"

using namespace hierband;

// The OpenMP kernels partition their output without reordering any
// accumulation, so they must agree with the serial reference bitwise.

TEST_CASE("parallel kernels are bitwise equal to the serial reference") {
  Rng rng(5);
  DataMatrix X(37, 23);
  for (int i = 0; i < X.n; ++i)
    for (int j = 0; j < X.p; ++j) X.at(i, j) = rng.normal() * (1 + 0.1 * j);

  SymMatrix s_par = sample_covariance(X);
  SymMatrix s_ser = serial::sample_covariance(X);
  CHECK(testref::max_abs_diff(s_par, s_ser) == 0.0);

  SymMatrix s2_par = sample_covariance(X, false);
  SymMatrix s2_ser = serial::sample_covariance(X, false);
  CHECK(testref::max_abs_diff(s2_par, s2_ser) == 0.0);

  auto b_par = subdiag_norms(s_par);
  auto b_ser = serial::subdiag_norms(s_ser);
  REQUIRE(b_par.size() == b_ser.size());
  for (size_t i = 0; i < b_par.size(); ++i) CHECK(b_par[i] == b_ser[i]);

  std::vector<double> v(23), y1, y2;
  for (auto& x : v) x = rng.normal();
  symv(s_par, v, y1);
  serial::symv(s_ser, v, y2);
  for (int i = 0; i < 23; ++i) CHECK(y1[i] == y2[i]);

  std::vector<double> coeff(22);
  for (size_t m = 0; m < coeff.size(); ++m) coeff[m] = 1.0 / (1.0 + m);
  CHECK(testref::max_abs_diff(scale_subdiagonals(s_par, coeff),
                              serial::scale_subdiagonals(s_ser, coeff)) == 0.0);
}

TEST_CASE("scale_subdiagonals keeps the diagonal and scales levels") {
  SymMatrix M = testref::random_sym(6, 11);
  std::vector<double> coeff(5, 0.0);
  coeff[4] = 0.5;  // level 5 = first off-diagonal at p=6
  SymMatrix out = scale_subdiagonals(M, coeff);
  for (int i = 0; i < 6; ++i) CHECK(out(i, i) == M(i, i));
  CHECK(out(0, 1) == 0.5 * M(0, 1));
  CHECK(out(0, 2) == 0.0);
}
