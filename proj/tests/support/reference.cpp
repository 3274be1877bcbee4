#include "support/reference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "hierband/norms.hpp"
#include "hierband/rng.hpp"

namespace hierband::testref {

namespace {

// All entries of g_l with positive weight, as (j, k, w_lm) triples over the
// full matrix (both mirror copies), so inner products and norms match the
// 2m-entry counting without any factor bookkeeping.
struct LevelCoords {
  std::vector<int> j, k;
  std::vector<double> w;
};

std::vector<LevelCoords> level_coords(const WeightScheme& scheme) {
  const int p = scheme.dim();
  std::vector<LevelCoords> out(p - 1);
  for (int l = 1; l <= p - 1; ++l) {
    for (int m = 1; m <= l; ++m) {
      double wm = scheme.weight(l, m);
      if (!(wm > 0)) continue;
      int d = p - m;
      for (int i = 0; i + d < p; ++i) {
        out[l - 1].j.push_back(i);
        out[l - 1].k.push_back(i + d);
        out[l - 1].w.push_back(wm);
        out[l - 1].j.push_back(i + d);
        out[l - 1].k.push_back(i);
        out[l - 1].w.push_back(wm);
      }
    }
  }
  return out;
}

}  // namespace

SymMatrix dense_bcd_sweep(const SymMatrix& S, double lambda, const WeightScheme& w,
                          std::vector<SymMatrix>& A) {
  const int p = S.dim();
  if (A.empty()) A.assign(p - 1, SymMatrix(p, 0.0));
  for (int l = 1; l <= p - 1; ++l) {
    // residual excluding block l
    SymMatrix R = S;
    for (int l2 = 1; l2 <= p - 1; ++l2) {
      if (l2 == l) continue;
      for (int m = 1; m <= l2; ++m) {
        double wm = w.weight(l2, m);
        if (!(wm > 0)) continue;
        int d = p - m;
        for (int i = 0; i + d < p; ++i)
          R.set(i, i + d, R(i, i + d) - lambda * wm * A[l2 - 1](i, i + d));
      }
    }
    std::vector<double> rn(l, 0.0);
    for (int m = 1; m <= l; ++m) rn[m - 1] = subdiag_norm(R, m);
    double nu = solve_nu(l, rn, w, lambda);
    double nup = std::max(nu, 0.0);
    SymMatrix& Al = A[l - 1];
    Al = SymMatrix(p, 0.0);
    for (int m = 1; m <= l; ++m) {
      double wm = w.weight(l, m);
      if (!(wm > 0)) continue;
      int d = p - m;
      double c = wm / (lambda * (wm * wm + nup));
      for (int i = 0; i + d < p; ++i) Al.set(i, i + d, c * R(i, i + d));
    }
  }
  SymMatrix out = S;
  for (int l = 1; l <= p - 1; ++l)
    for (int m = 1; m <= l; ++m) {
      double wm = w.weight(l, m);
      if (!(wm > 0)) continue;
      int d = p - m;
      for (int i = 0; i + d < p; ++i)
        out.set(i, i + d, out(i, i + d) - lambda * wm * A[l - 1](i, i + d));
    }
  return out;
}

double dense_bcd_sweep_change(const SymMatrix& S, double lambda, const WeightScheme& w,
                              std::vector<SymMatrix>& A) {
  std::vector<SymMatrix> before = A;
  dense_bcd_sweep(S, lambda, w, A);
  double ch = 0.0;
  for (size_t i = 0; i < A.size(); ++i) ch = std::max(ch, max_abs_diff(before[i], A[i]));
  return ch;
}

SymMatrix admm_prox_oracle(const SymMatrix& S, double lambda, const WeightScheme& w,
                           int max_iters, double tol) {
  const int p = S.dim();
  auto levels = level_coords(w);
  const double rho = 1.0;

  // per-entry coverage: 1 + rho * sum of w_lm^2 over levels containing it
  // (set() mirrors, so accumulate on one triangle only)
  SymMatrix denom(p, 1.0);
  for (auto& lc : levels)
    for (size_t t = 0; t < lc.j.size(); ++t)
      if (lc.j[t] < lc.k[t]) {
        double cur = denom(lc.j[t], lc.k[t]);
        denom.set(lc.j[t], lc.k[t], cur + rho * lc.w[t] * lc.w[t]);
      }

  SymMatrix x = S;
  std::vector<std::vector<double>> y(levels.size()), u(levels.size());
  for (size_t l = 0; l < levels.size(); ++l) {
    y[l].assign(levels[l].j.size(), 0.0);
    u[l].assign(levels[l].j.size(), 0.0);
    for (size_t t = 0; t < levels[l].j.size(); ++t)
      y[l][t] = levels[l].w[t] * x(levels[l].j[t], levels[l].k[t]);
  }

  SymMatrix x_prev = x;
  for (int it = 0; it < max_iters; ++it) {
    // x-update: diagonal quadratic solve per entry
    SymMatrix num = S;
    for (size_t l = 0; l < levels.size(); ++l)
      for (size_t t = 0; t < levels[l].j.size(); ++t)
        if (levels[l].j[t] < levels[l].k[t]) {
          int j = levels[l].j[t], k = levels[l].k[t];
          num.set(j, k, num(j, k) + rho * levels[l].w[t] * (y[l][t] - u[l][t]));
        }
    for (int j = 0; j < p; ++j)
      for (int k = j; k < p; ++k) x.set(j, k, num(j, k) / denom(j, k));

    // y-update: plain group soft-threshold of Mx + u, then dual ascent
    double prim_res = 0.0;
    for (size_t l = 0; l < levels.size(); ++l) {
      double vn = 0.0;
      std::vector<double>& yl = y[l];
      std::vector<double>& ul = u[l];
      const LevelCoords& lc = levels[l];
      std::vector<double> v(yl.size());
      for (size_t t = 0; t < yl.size(); ++t) {
        v[t] = lc.w[t] * x(lc.j[t], lc.k[t]) + ul[t];
        vn += v[t] * v[t];
      }
      vn = std::sqrt(vn);
      double shrink = vn > lambda / rho ? 1.0 - lambda / (rho * vn) : 0.0;
      for (size_t t = 0; t < yl.size(); ++t) {
        yl[t] = shrink * v[t];
        double r = lc.w[t] * x(lc.j[t], lc.k[t]) - yl[t];
        ul[t] += r;
        prim_res = std::max(prim_res, std::abs(r));
      }
    }
    double dx = max_abs_diff(x, x_prev);
    x_prev = x;
    if (it > 10 && dx < tol && prim_res < 10 * tol) break;
  }
  return x;
}

SymMatrix admm_psd_oracle(const SymMatrix& S, double lambda, double delta, const WeightScheme& w,
                          int max_iters, double tol) {
  const int p = S.dim();
  auto levels = level_coords(w);
  const double rho = 1.0;

  SymMatrix denom(p, 1.0 + rho);  // the spectral block covers every entry
  for (auto& lc : levels)
    for (size_t t = 0; t < lc.j.size(); ++t)
      if (lc.j[t] < lc.k[t]) {
        double cur = denom(lc.j[t], lc.k[t]);
        denom.set(lc.j[t], lc.k[t], cur + rho * lc.w[t] * lc.w[t]);
      }

  SymMatrix x = S;
  std::vector<std::vector<double>> y(levels.size()), u(levels.size());
  for (size_t l = 0; l < levels.size(); ++l) {
    y[l].assign(levels[l].j.size(), 0.0);
    u[l].assign(levels[l].j.size(), 0.0);
  }
  Eigen::MatrixXd y0(p, p), u0 = Eigen::MatrixXd::Zero(p, p);

  // init spectral block at the clipped start
  {
    Eigen::Map<const Eigen::MatrixXd> xe(x.data(), p, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xe);
    Eigen::VectorXd d = es.eigenvalues().cwiseMax(delta);
    y0 = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  }

  SymMatrix x_prev = x;
  for (int it = 0; it < max_iters; ++it) {
    SymMatrix num = S;
    for (size_t l = 0; l < levels.size(); ++l)
      for (size_t t = 0; t < levels[l].j.size(); ++t)
        if (levels[l].j[t] < levels[l].k[t]) {
          int j = levels[l].j[t], k = levels[l].k[t];
          num.set(j, k, num(j, k) + rho * levels[l].w[t] * (y[l][t] - u[l][t]));
        }
    for (int j = 0; j < p; ++j)
      for (int k = j; k < p; ++k)
        x.set(j, k, (num(j, k) + rho * 0.5 * ((y0(j, k) - u0(j, k)) + (y0(k, j) - u0(k, j)))) / denom(j, k));

    double prim_res = 0.0;
    for (size_t l = 0; l < levels.size(); ++l) {
      double vn = 0.0;
      const LevelCoords& lc = levels[l];
      std::vector<double> v(y[l].size());
      for (size_t t = 0; t < v.size(); ++t) {
        v[t] = lc.w[t] * x(lc.j[t], lc.k[t]) + u[l][t];
        vn += v[t] * v[t];
      }
      vn = std::sqrt(vn);
      double shrink = vn > lambda / rho ? 1.0 - lambda / (rho * vn) : 0.0;
      for (size_t t = 0; t < v.size(); ++t) {
        y[l][t] = shrink * v[t];
        double r = lc.w[t] * x(lc.j[t], lc.k[t]) - y[l][t];
        u[l][t] += r;
        prim_res = std::max(prim_res, std::abs(r));
      }
    }
    {
      Eigen::Map<const Eigen::MatrixXd> xe(x.data(), p, p);
      Eigen::MatrixXd v = xe + u0;
      Eigen::MatrixXd vs = 0.5 * (v + v.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(vs);
      Eigen::VectorXd d = es.eigenvalues().cwiseMax(delta);
      y0 = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
      Eigen::MatrixXd r = xe - y0;
      u0 += r;
      prim_res = std::max(prim_res, r.cwiseAbs().maxCoeff());
    }
    double dx = max_abs_diff(x, x_prev);
    x_prev = x;
    if (it > 10 && dx < tol && prim_res < 100 * tol) break;
  }
  // the spectral block carries the feasible iterate
  SymMatrix out(p);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) out.set(j, k, 0.5 * (y0(j, k) + y0(k, j)));
  return out;
}

SymMatrix subgradient_oracle(const SymMatrix& S, double lambda, const WeightScheme& w, int iters) {
  const int p = S.dim();
  auto levels = level_coords(w);
  SymMatrix x = S, best = S;
  double best_f = primal_objective(x, S, lambda, w);
  const double a0 = 0.5 / (1.0 + lambda);
  for (int it = 0; it < iters; ++it) {
    SymMatrix g(p, 0.0);
    for (int j = 0; j < p; ++j)
      for (int k = j; k < p; ++k) g.set(j, k, x(j, k) - S(j, k));
    for (auto& lc : levels) {
      double gn = 0.0;
      for (size_t t = 0; t < lc.j.size(); ++t) {
        double v = lc.w[t] * x(lc.j[t], lc.k[t]);
        gn += v * v;
      }
      gn = std::sqrt(gn);
      if (gn <= 0) continue;
      for (size_t t = 0; t < lc.j.size(); ++t)
        if (lc.j[t] < lc.k[t]) {
          int j = lc.j[t], k = lc.k[t];
          g.set(j, k, g(j, k) + lambda * lc.w[t] * lc.w[t] * x(j, k) / gn);
        }
    }
    double step = a0 / std::sqrt(static_cast<double>(it) + 1.0);
    for (int j = 0; j < p; ++j)
      for (int k = j; k < p; ++k) x.set(j, k, x(j, k) - step * g(j, k));
    double f = primal_objective(x, S, lambda, w);
    if (f < best_f) {
      best_f = f;
      best = x;
    }
  }
  return best;
}

double solve_nu_gridscan(int level, const std::vector<double>& rnorms, const WeightScheme& w,
                         double lambda) {
  const double lam2 = lambda * lambda;
  auto h = [&](double nu) { return h_eval(nu, level, rnorms, w); };
  double wl = w.level_weight(level);
  double pole = wl * wl;
  for (int m = 1; m <= level; ++m) {
    double wm = w.weight(level, m);
    if (wm > 0 && rnorms[m - 1] > 0) pole = std::min(pole, wm * wm);
  }
  double lo = -pole + 1e-12, hi = -pole + 1e-12;
  if (h(lo) <= lam2) return lo;
  // march a coarse grid until h falls below the target
  double spanstep = std::max(1.0, pole);
  while (h(hi) > lam2) {
    lo = hi;
    hi += spanstep;
    spanstep *= 1.5;
    if (hi > 1e18) break;
  }
  for (int it = 0; it < 400; ++it) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) > lam2)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double primal_objective(const SymMatrix& sigma, const SymMatrix& S, double lambda,
                        const WeightScheme& w) {
  double d = frobenius_dist(sigma, S);
  return 0.5 * d * d + lambda * hier_penalty(sigma, w);
}

SymMatrix random_sym(int p, uint64_t seed, double diag_boost) {
  Rng rng(seed);
  SymMatrix S(p);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) S.set(j, k, rng.normal() + (j == k ? diag_boost : 0.0));
  return S;
}

SymMatrix random_covariance(int p, int n, uint64_t seed) {
  Rng rng(seed);
  DataMatrix X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X.at(i, j) = rng.normal();
  SymMatrix S(p);
  for (int j = 0; j < p; ++j)
    for (int k = j; k < p; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += X.at(i, j) * X.at(i, k);
      S.set(j, k, s / n);
    }
  return S;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double m = 0.0;
  size_t nn = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < nn; ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace hierband::testref
