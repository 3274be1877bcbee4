#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hierband/csv.hpp"
#include "hierband/kernels.hpp"
#include "hierband/norms.hpp"
#include "hierband/rng.hpp"
#include "hierband/sym_matrix.hpp"
#include "support/reference.hpp"

using namespace hierband;

TEST_CASE("subdiag_indices matches the corner-inward level convention") {
  auto s1 = subdiag_indices(5, 1);
  REQUIRE(s1.size() == 2);
  CHECK(s1[0] == std::pair{1, 5});
  CHECK(s1[1] == std::pair{5, 1});

  auto diag = subdiag_indices(5, 5);
  REQUIRE(diag.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(diag[i] == std::pair{i + 1, i + 1});

  auto s2 = subdiag_indices(4, 2);
  REQUIRE(s2.size() == 4);
  CHECK(s2[0] == std::pair{1, 3});
  CHECK(s2[1] == std::pair{2, 4});
  CHECK(s2[2] == std::pair{3, 1});
  CHECK(s2[3] == std::pair{4, 2});

  CHECK_THROWS_AS(subdiag_indices(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(subdiag_indices(4, 5), std::invalid_argument);
}

TEST_CASE("subdiagonal levels partition the index square") {
  for (int p : {1, 2, 5, 9}) {
    int total = 0;
    for (int m = 1; m <= p; ++m) {
      auto idx = subdiag_indices(p, m);
      CHECK(static_cast<int>(idx.size()) == subdiag_size(p, m));
      total += static_cast<int>(idx.size());
    }
    CHECK(total == p * p);
  }
}

TEST_CASE("subdiag_norm on small matrices") {
  SymMatrix id = SymMatrix::identity(4);
  for (int m = 1; m <= 3; ++m) CHECK(subdiag_norm(id, m) == 0.0);

  SymMatrix m2(2);
  m2.set(0, 0, 1.0);
  m2.set(1, 1, 1.0);
  m2.set(0, 1, 0.5);
  CHECK(subdiag_norm(m2, 1) == doctest::Approx(0.70710678118654752).epsilon(1e-12));

  SymMatrix m3(3, 0.0);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      if (j != k) m3.set(j, k, 1.0);
  CHECK(subdiag_norm(m3, 2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Frobenius norm splits across subdiagonal levels") {
  SymMatrix M = testref::random_sym(7, 123);
  auto b = subdiag_norms(M);
  double total = 0.0;
  for (double v : b) total += v * v;
  double f = frobenius_dist(M, SymMatrix(7, 0.0));
  CHECK(total == doctest::Approx(f * f).epsilon(1e-12));
}

TEST_CASE("sample covariance: hand examples") {
  DataMatrix same(2, 2);
  same.at(0, 0) = 1.5;
  same.at(0, 1) = -2.0;
  same.at(1, 0) = 1.5;
  same.at(1, 1) = -2.0;
  SymMatrix S = sample_covariance(same);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) CHECK(S(j, k) == 0.0);

  DataMatrix X(2, 2);
  X.at(0, 0) = 1.0;
  X.at(0, 1) = 0.0;
  X.at(1, 0) = -1.0;
  X.at(1, 1) = 0.0;
  S = sample_covariance(X);
  CHECK(S(0, 0) == doctest::Approx(1.0));
  CHECK(S(0, 1) == 0.0);
  CHECK(S(1, 1) == 0.0);

  DataMatrix one(1, 3);
  one.at(0, 0) = 4.0;
  one.at(0, 1) = 5.0;
  one.at(0, 2) = 6.0;
  S = sample_covariance(one);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) CHECK(S(j, k) == 0.0);

  // without centering, a single row keeps its second moment
  S = sample_covariance(one, false);
  CHECK(S(0, 0) == doctest::Approx(16.0));
  CHECK(S(1, 2) == doctest::Approx(30.0));
}

TEST_CASE("sample covariance is positive semidefinite") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    DataMatrix X(12, 6);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 6; ++j) X.at(i, j) = rng.normal() * (1.0 + j);
    CHECK(min_eigenvalue(sample_covariance(X)) >= -1e-10);
  }
}

TEST_CASE("weighted subdiagonal norms") {
  SymMatrix m2(2);
  m2.set(0, 0, 1.0);
  m2.set(1, 1, 2.0);
  m2.set(0, 1, 0.5);
  WeightScheme w = WeightScheme::general_hier(2);
  CHECK(norm_21(m2, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm_2inf(m2, w) == doctest::Approx(0.5).epsilon(1e-12));

  SymMatrix d = SymMatrix::identity(5);
  WeightScheme w5 = WeightScheme::general_hier(5);
  CHECK(norm_21(d, w5) == 0.0);
  CHECK(norm_2inf(d, w5) == 0.0);
}

TEST_CASE("off-diagonal inner product bound by dual norms") {
  WeightScheme w = WeightScheme::general_hier(8);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    SymMatrix A = testref::random_sym(8, 100 + seed);
    SymMatrix B = testref::random_sym(8, 200 + seed);
    double dot = 0.0;
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k)
        if (j != k) dot += A(j, k) * B(j, k);
    CHECK(dot <= norm_21(A, w) * norm_2inf(B, w) + 1e-12);
  }
}

TEST_CASE("distance examples: Frobenius and operator") {
  SymMatrix A(2, 0.0), B(2, 0.0);
  A.set(0, 0, 3.0);
  A.set(1, 1, -4.0);
  CHECK(frobenius_dist(A, B) == doctest::Approx(5.0));
  CHECK(operator_dist(A, B) == doctest::Approx(4.0));

  SymMatrix ones(2, 1.0);
  CHECK(operator_dist(ones, B) == doctest::Approx(2.0));
  CHECK(operator_dist(A, A) == 0.0);

  SymMatrix C(3, 0.0);
  CHECK_THROWS_AS(frobenius_dist(A, C), std::invalid_argument);
}

TEST_CASE("power iteration agrees with the eigensolver route") {
  // operator_norm switches implementations at p = 512; check them against
  // each other on a matrix where both are exact.
  SymMatrix M = testref::random_covariance(60, 80, 9);
  double full = operator_norm(M);
  // force the power-iteration path by embedding into a larger matrix
  SymMatrix big(600, 0.0);
  for (int j = 0; j < 60; ++j)
    for (int k = j; k < 60; ++k) big.set(j, k, M(j, k));
  CHECK(operator_norm(big) == doctest::Approx(full).epsilon(1e-8));
}

TEST_CASE("CSV round trip at 17 digits") {
  SymMatrix M = testref::random_sym(6, 77);
  std::string path = "roundtrip_test_matrix.csv";
  write_sym_matrix(M, path);
  SymMatrix back = read_sym_matrix(path);
  CHECK(testref::max_abs_diff(M, back) == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("CSV header auto-detection") {
  std::string path = "header_test_data.csv";
  {
    std::ofstream f(path);
    f << "alpha,beta\n1.5,2\n3,4\n";
  }
  DataMatrix X = read_data_matrix(path);
  CHECK(X.n == 2);
  CHECK(X.p == 2);
  CHECK(X.at(0, 0) == 1.5);
  CHECK(X.at(1, 1) == 4.0);
  std::remove(path.c_str());

  {
    std::ofstream f(path);
    f << "1,2\n3,nope\n";
  }
  CHECK_THROWS(read_data_matrix(path));
  std::remove(path.c_str());
}
