#include "hierband/kernels.hpp"

#include <cmath>

namespace hierband {

namespace {

std::vector<double> column_means(const DataMatrix& X) {
  std::vector<double> mu(X.p, 0.0);
  for (int j = 0; j < X.p; ++j) {
    double s = 0.0;
    for (int i = 0; i < X.n; ++i) s += X.at(i, j);
    mu[j] = s / X.n;
  }
  return mu;
}

inline double cov_entry(const DataMatrix& X, const std::vector<double>& mu, int j, int k) {
  double s = 0.0;
  const double mj = mu[j], mk = mu[k];
  for (int i = 0; i < X.n; ++i) s += (X.at(i, j) - mj) * (X.at(i, k) - mk);
  return s / X.n;
}

}  // namespace

SymMatrix sample_covariance(const DataMatrix& X, bool center) {
  if (X.n < 1) throw std::invalid_argument("sample_covariance: n must be >= 1");
  std::vector<double> mu = center ? column_means(X) : std::vector<double>(X.p, 0.0);
  SymMatrix S(X.p);
  const int p = X.p;
#pragma omp parallel for schedule(dynamic, 4)
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) S.set(j, k, cov_entry(X, mu, j, k));
  return S;
}

std::vector<double> subdiag_norms(const SymMatrix& M) {
  const int p = M.dim();
  std::vector<double> out(p, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (int m = 1; m <= p; ++m) {
    const int d = p - m;
    double s = 0.0;
    if (d == 0) {
      for (int i = 0; i < p; ++i) s += M(i, i) * M(i, i);
    } else {
      for (int i = 0; i + d < p; ++i) s += M(i, i + d) * M(i, i + d);
      s *= 2.0;  // both mirror copies
    }
    out[m - 1] = std::sqrt(s);
  }
  return out;
}

void symv(const SymMatrix& M, const std::vector<double>& x, std::vector<double>& y) {
  const int p = M.dim();
  y.assign(p, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < p; ++i) {
    double s = 0.0;
    const double* row = M.data() + static_cast<size_t>(i) * p;
    for (int j = 0; j < p; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

SymMatrix scale_subdiagonals(const SymMatrix& S, const std::vector<double>& coeff) {
  const int p = S.dim();
  if (static_cast<int>(coeff.size()) != p - 1)
    throw std::invalid_argument("scale_subdiagonals: need p-1 coefficients");
  SymMatrix out(p);
  for (int i = 0; i < p; ++i) out.set(i, i, S(i, i));
#pragma omp parallel for schedule(dynamic, 8)
  for (int m = 1; m <= p - 1; ++m) {
    const int d = p - m;
    const double c = coeff[m - 1];
    for (int i = 0; i + d < p; ++i) out.set(i, i + d, c * S(i, i + d));
  }
  return out;
}

namespace serial {

SymMatrix sample_covariance(const DataMatrix& X, bool center) {
  if (X.n < 1) throw std::invalid_argument("sample_covariance: n must be >= 1");
  std::vector<double> mu = center ? column_means(X) : std::vector<double>(X.p, 0.0);
  SymMatrix S(X.p);
  for (int j = 0; j < X.p; ++j)
    for (int k = j; k < X.p; ++k) S.set(j, k, cov_entry(X, mu, j, k));
  return S;
}

std::vector<double> subdiag_norms(const SymMatrix& M) {
  const int p = M.dim();
  std::vector<double> out(p, 0.0);
  for (int m = 1; m <= p; ++m) {
    const int d = p - m;
    double s = 0.0;
    if (d == 0) {
      for (int i = 0; i < p; ++i) s += M(i, i) * M(i, i);
    } else {
      for (int i = 0; i + d < p; ++i) s += M(i, i + d) * M(i, i + d);
      s *= 2.0;
    }
    out[m - 1] = std::sqrt(s);
  }
  return out;
}

void symv(const SymMatrix& M, const std::vector<double>& x, std::vector<double>& y) {
  const int p = M.dim();
  y.assign(p, 0.0);
  for (int i = 0; i < p; ++i) {
    double s = 0.0;
    const double* row = M.data() + static_cast<size_t>(i) * p;
    for (int j = 0; j < p; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

SymMatrix scale_subdiagonals(const SymMatrix& S, const std::vector<double>& coeff) {
  const int p = S.dim();
  if (static_cast<int>(coeff.size()) != p - 1)
    throw std::invalid_argument("scale_subdiagonals: need p-1 coefficients");
  SymMatrix out(p);
  for (int i = 0; i < p; ++i) out.set(i, i, S(i, i));
  for (int m = 1; m <= p - 1; ++m) {
    const int d = p - m;
    const double c = coeff[m - 1];
    for (int i = 0; i + d < p; ++i) out.set(i, i + d, c * S(i, i + d));
  }
  return out;
}

}  // namespace serial

}  // namespace hierband
