#include "hierband/norms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "hierband/kernels.hpp"

namespace hierband {

namespace {

Eigen::Map<const Eigen::MatrixXd> as_eigen(const SymMatrix& M) {
  // Row/column major is immaterial for a symmetric matrix.
  return Eigen::Map<const Eigen::MatrixXd>(M.data(), M.dim(), M.dim());
}

double power_iteration_absmax(const SymMatrix& M) {
  const int p = M.dim();
  std::vector<double> v(p), y;
  // Fixed deterministic start with a mild sweep of signs to avoid starting
  // orthogonal to the dominant eigenvector.
  for (int i = 0; i < p; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * i + 0.3);
  double nv = 0.0;
  for (double x : v) nv += x * x;
  nv = std::sqrt(nv);
  for (double& x : v) x /= nv;

  double lam = 0.0;
  for (int it = 0; it < 10000; ++it) {
    symv(M, v, y);
    double ny = 0.0;
    for (double x : y) ny += x * x;
    ny = std::sqrt(ny);
    if (ny == 0.0) return 0.0;
    double prev = lam;
    lam = ny;
    for (int i = 0; i < p; ++i) v[i] = y[i] / ny;
    if (it > 0 && std::abs(lam - prev) <= 1e-10 * std::max(1.0, lam)) break;
  }
  return lam;
}

}  // namespace

double subdiag_norm(const SymMatrix& M, int m) {
  check_level(M.dim(), m);
  const int p = M.dim();
  const int d = p - m;
  double s = 0.0;
  if (d == 0) {
    for (int i = 0; i < p; ++i) s += M(i, i) * M(i, i);
  } else {
    for (int i = 0; i + d < p; ++i) s += M(i, i + d) * M(i, i + d);
    s *= 2.0;
  }
  return std::sqrt(s);
}

double frobenius_dist(const SymMatrix& A, const SymMatrix& B) {
  if (A.dim() != B.dim()) throw std::invalid_argument("frobenius_dist: dimension mismatch");
  const size_t nn = static_cast<size_t>(A.dim()) * A.dim();
  double s = 0.0;
  for (size_t i = 0; i < nn; ++i) {
    double d = A.data()[i] - B.data()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double operator_norm(const SymMatrix& M) {
  const int p = M.dim();
  if (p <= 512) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_eigen(M), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numerical_error("operator_norm: eigensolver failed");
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(p - 1)));
  }
  return power_iteration_absmax(M);
}

double operator_dist(const SymMatrix& A, const SymMatrix& B) {
  if (A.dim() != B.dim()) throw std::invalid_argument("operator_dist: dimension mismatch");
  SymMatrix D(A.dim());
  const size_t nn = static_cast<size_t>(A.dim()) * A.dim();
  for (size_t i = 0; i < nn; ++i) D.data()[i] = A.data()[i] - B.data()[i];
  return operator_norm(D);
}

double norm_21(const SymMatrix& M, const WeightScheme& w) {
  const int p = M.dim();
  double s = 0.0;
  for (int l = 1; l <= p - 1; ++l) s += w.level_weight(l) * subdiag_norm(M, l);
  return s;
}

double norm_2inf(const SymMatrix& M, const WeightScheme& w) {
  const int p = M.dim();
  double s = 0.0;
  for (int l = 1; l <= p - 1; ++l) s = std::max(s, subdiag_norm(M, l) / w.level_weight(l));
  return s;
}

double hier_penalty(const SymMatrix& M, const WeightScheme& w) {
  const int p = M.dim();
  std::vector<double> b = subdiag_norms(M);
  std::vector<double> scale(p - 1, 1.0);
  b.resize(p - 1);
  return hier_penalty_scaled(b, scale, w);
}

double hier_penalty_scaled(const std::vector<double>& b, const std::vector<double>& scale, const WeightScheme& w) {
  const int p = w.dim();
  double total = 0.0;
  for (int l = 1; l <= p - 1; ++l) {
    double s = 0.0;
    for (int m = 1; m <= l; ++m) {
      double t = w.weight(l, m) * scale[m - 1] * b[m - 1];
      s += t * t;
    }
    total += std::sqrt(s);
  }
  return total;
}

double min_eigenvalue(const SymMatrix& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_eigen(M), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numerical_error("min_eigenvalue: eigensolver failed");
  return es.eigenvalues()(0);
}

}  // namespace hierband
