#include "hierband/psd.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>

#include "hierband/norms.hpp"

namespace hierband {

double default_delta(const SymMatrix& S) {
  double s = 0.0;
  for (int i = 0; i < S.dim(); ++i) s += S(i, i);
  return 1e-4 * s / S.dim();
}

SymMatrix psd_project_dual(const SymMatrix& M, double delta) {
  const int p = M.dim();
  Eigen::Map<const Eigen::MatrixXd> m(M.data(), p, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw numerical_error("psd_project_dual: eigensolver failed");
  Eigen::VectorXd d = es.eigenvalues();
  for (int i = 0; i < p; ++i) d(i) = std::max(d(i) + delta, 0.0);
  Eigen::MatrixXd out = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  SymMatrix R(p);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) R.set(j, k, 0.5 * (out(j, k) + out(k, j)));
  return R;
}

PsdFitResult fit_psd(const SymMatrix& S, const PsdFitConfig& cfg) {
  const int p = S.dim();
  FitConfig inner(cfg.lambda, cfg.scheme);
  inner.root_tol = cfg.root_tol;
  inner.zero_tol = cfg.zero_tol;
  inner.gap_rtol = cfg.gap_rtol;

  PsdFitResult res;
  FitResult unconstrained = fit(S, inner);
  double me = min_eigenvalue(unconstrained.sigma_hat);
  if (me >= cfg.delta) {
    res.sigma_tilde = unconstrained.sigma_hat;
    res.min_eig = me;
    res.outer_iters = 0;
    res.converged = true;
    res.coincides_with_unconstrained = true;
    res.primal_obj = unconstrained.primal_obj;
    res.threshold_fit = std::move(unconstrained);
    return res;
  }

  const double conv_tol = cfg.conv_tol > 0 ? cfg.conv_tol : 1e-9 * p;
  WeightScheme w = cfg.scheme;

  auto primal_of = [&](const SymMatrix& sig) {
    double f = frobenius_dist(sig, S);
    return 0.5 * f * f + cfg.lambda * hier_penalty(sig, w);
  };

  SymMatrix lamC(p, 0.0);          // lambda * C, PSD by construction
  SymMatrix sigma_prev(p, 0.0);
  FitResult last_fit;
  double obj_prev = std::numeric_limits<double>::infinity();
  bool have_prev = false;
  int iters = 0;
  bool converged = false;

  Eigen::MatrixXd G(p, p);
  for (iters = 1; iters <= cfg.max_outer; ++iters) {
    // threshold pass on the shifted base matrix
    SymMatrix base(p);
    for (int j = 0; j < p; ++j)
      for (int k = j; k < p; ++k) base.set(j, k, S(j, k) + lamC(j, k));
    FitResult f = fit(base, inner);
    last_fit = f;

    // spectral step: clip eigenvalues of (fitted - lambda C) at the floor
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k) G(j, k) = f.sigma_hat(j, k) - lamC(j, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.info() != Eigen::Success) throw numerical_error("fit_psd: eigensolver failed");
    Eigen::VectorXd mu = es.eigenvalues();
    Eigen::VectorXd clip(p), bump(p);
    for (int i = 0; i < p; ++i) {
      clip(i) = std::max(mu(i), cfg.delta);
      bump(i) = clip(i) - mu(i);  // = [delta - mu]_+
    }
    Eigen::MatrixXd st = es.eigenvectors() * clip.asDiagonal() * es.eigenvectors().transpose();
    Eigen::MatrixXd cc = es.eigenvectors() * bump.asDiagonal() * es.eigenvectors().transpose();
    SymMatrix sigma(p);
    for (int j = 0; j < p; ++j)
      for (int k = j; k < p; ++k) {
        sigma.set(j, k, 0.5 * (st(j, k) + st(k, j)));
        lamC.set(j, k, 0.5 * (cc(j, k) + cc(k, j)));
      }

    double obj = primal_of(sigma);
    if (have_prev && obj > obj_prev + 1e-9 * (1.0 + std::abs(obj_prev))) {
      std::ostringstream os;
      os << "fit_psd: objective increased at outer iteration " << iters << " (" << obj_prev << " -> "
         << obj << ")";
      throw numerical_error(os.str());
    }
    double step = have_prev ? frobenius_dist(sigma, sigma_prev) : std::numeric_limits<double>::infinity();
    sigma_prev = sigma;
    obj_prev = obj;
    have_prev = true;
    if (step <= conv_tol) {
      converged = true;
      break;
    }
  }

  res.sigma_tilde = sigma_prev;
  res.min_eig = min_eigenvalue(sigma_prev);
  res.outer_iters = std::min(iters, cfg.max_outer);
  res.converged = converged;
  res.coincides_with_unconstrained = false;
  res.primal_obj = obj_prev;
  res.threshold_fit = std::move(last_fit);
  return res;
}

}  // namespace hierband
