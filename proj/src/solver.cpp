#include "hierband/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hierband/kernels.hpp"
#include "hierband/norms.hpp"

namespace hierband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Packed active terms of one level: h(nu) = sum s2[i] / (w2[i] + nu)^2.
struct LevelTerms {
  std::vector<double> w2;  // squared weights of active entries
  std::vector<double> s2;  // w^2 * r^2
  double q2 = 0.0;         // sum s2 = ||D R_g||^2
  double w2min = kInf;

  double h(double nu) const {
    double s = 0.0;
    for (size_t i = 0; i < w2.size(); ++i) {
      double d = w2[i] + nu;
      s += s2[i] / (d * d);
    }
    return s;
  }
  double hprime(double nu) const {
    double s = 0.0;
    for (size_t i = 0; i < w2.size(); ++i) {
      double d = w2[i] + nu;
      s += s2[i] / (d * d * d);
    }
    return -2.0 * s;
  }
};

// Monotone decreasing root of h(nu) = target on [lo, hi] with
// h(lo) >= target >= h(hi).  Bisection localizes, Newton finishes.
double find_root(const LevelTerms& t, double target, double lo, double hi, double rtol, double warm) {
  double nu = (warm > lo && warm < hi) ? warm : 0.5 * (lo + hi);
  double h = 0.0;
  for (int it = 0; it < 200; ++it) {
    h = t.h(nu);
    if (std::abs(h - target) <= rtol * target) return nu;
    if (h > target)
      lo = nu;
    else
      hi = nu;
    double step = nu - (h - target) / t.hprime(nu);
    bool wide = (hi - lo) > 1e-2 * (1.0 + std::abs(nu));
    nu = (!wide && step > lo && step < hi) ? step : 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * (1.0 + std::abs(nu))) return nu;
  }
  return nu;  // bracket has collapsed to machine width by now
}

double solve_level(const LevelTerms& t, double wl, double lambda, double rtol, double warm) {
  if (t.w2.empty()) return -wl * wl;  // h == 0: closed-form limit of the single-term rule
  const double lam2 = lambda * lambda;
  if (t.w2.size() == 1) {
    // single active term: w^2 r^2/(w^2+nu)^2 = lambda^2 exactly
    return std::sqrt(t.s2[0]) / lambda - t.w2[0];
  }
  double h0 = t.h(0.0);
  if (h0 <= lam2) {
    // level zeroed; locate the nonpositive root for diagnostics
    double pole = -t.w2min;
    double lo = pole + std::max(1e-14, -pole * 1e-12);
    if (t.h(lo) <= lam2) return lo;  // root numerically at the pole
    return find_root(t, lam2, lo, 0.0, rtol, warm);
  }
  double q = std::sqrt(t.q2);
  double lo = std::max((q - lambda * wl * wl) / lambda, 0.0);
  double hi = q / lambda;
  // The bracket is exact in real arithmetic; allow one widening for rounding.
  if (t.h(lo) < lam2) lo = std::max(lo - 1e-8 * (1.0 + lo), 0.0);
  if (t.h(hi) > lam2) hi = hi * (1.0 + 1e-8) + 1e-12;
  if (t.h(lo) < lam2 || t.h(hi) > lam2) {
    std::ostringstream os;
    os << "solve_nu: bracket failure (lambda=" << lambda << ", lo=" << lo << ", hi=" << hi
       << ", h(lo)=" << t.h(lo) << ", h(hi)=" << t.h(hi) << ", target=" << lam2 << ")";
    throw numerical_error(os.str());
  }
  return find_root(t, lam2, lo, hi, rtol, warm);
}

LevelTerms collect_terms(int level, std::span<const double> rnorms, const WeightScheme& w) {
  LevelTerms t;
  t.w2.reserve(level);
  t.s2.reserve(level);
  for (int m = 1; m <= level; ++m) {
    double wm = w.weight(level, m);
    double r = rnorms[m - 1];
    if (wm > 0.0 && r > 0.0) {
      double w2 = wm * wm;
      double s2 = w2 * r * r;
      t.w2.push_back(w2);
      t.s2.push_back(s2);
      t.q2 += s2;
      t.w2min = std::min(t.w2min, w2);
    }
  }
  return t;
}

// Flat ragged storage for the dual block scales a[l][m], 1 <= m <= l <= p-1.
struct BlockScales {
  explicit BlockScales(int p) : p_(p), a_(static_cast<size_t>(p - 1) * p / 2, 0.0) {}
  double* row(int l) { return a_.data() + static_cast<size_t>(l - 1) * l / 2; }
  const double* row(int l) const { return a_.data() + static_cast<size_t>(l - 1) * l / 2; }
  int p_;
  std::vector<double> a_;
};

struct Certificate {
  double primal = 0.0;
  double gap = 0.0;
  std::vector<double> feasibility;
};

// Primal objective and duality gap at taper t with dual blocks a.  Blocks
// with ||A_gl|| > 1 are scaled back to the feasible set before evaluating
// the dual objective, so the gap is a genuine optimality certificate.
Certificate certificate(const std::vector<double>& b, const std::vector<double>& t,
                        const BlockScales& a, const WeightScheme& w, double lambda) {
  const int p = w.dim();
  Certificate c;
  c.feasibility.assign(p - 1, 0.0);
  double fit2 = 0.0;
  for (int m = 1; m <= p - 1; ++m) {
    double d = (t[m - 1] - 1.0) * b[m - 1];
    fit2 += d * d;
  }
  c.primal = 0.5 * fit2 + lambda * hier_penalty_scaled(b, t, w);

  // e[m] = residual scale of the normalized dual point
  std::vector<double> tot(p - 1, 0.0);
  for (int l = 1; l <= p - 1; ++l) {
    const double* al = a.row(l);
    double f2 = 0.0;
    for (int m = 1; m <= l; ++m) {
      double v = al[m - 1] * b[m - 1];
      f2 += v * v;
    }
    double feas = std::sqrt(f2);
    c.feasibility[l - 1] = feas;
    double scale = feas > 1.0 ? 1.0 / feas : 1.0;
    for (int m = 1; m <= l; ++m) tot[m - 1] += lambda * w.weight(l, m) * al[m - 1] * scale;
  }
  double dual_fit2 = 0.0;
  double cross = 0.0;
  for (int m = 1; m <= p - 1; ++m) {
    double e = 1.0 - tot[m - 1];
    dual_fit2 += e * e * b[m - 1] * b[m - 1];
    cross += b[m - 1] * b[m - 1];
  }
  // gap = f(Sigma) - [0.5||S||^2 - 0.5||S - lambda sum W*A~||^2]
  c.gap = c.primal + 0.5 * dual_fit2 - 0.5 * cross;
  if (c.gap < 0.0) c.gap = 0.0;
  return c;
}

FitResult finalize(const SymMatrix& S, const std::vector<double>& b, std::vector<double> taper,
                   std::vector<double> nu, const Certificate& cert, double zero_tol, int sweeps) {
  const int p = S.dim();
  FitResult res;
  for (int m = 1; m <= p - 1; ++m) {
    double& t = taper[m - 1];
    t = std::clamp(t, 0.0, 1.0);
    if (t < zero_tol) t = 0.0;
  }
  int Lhat = 0;
  for (int l = 1; l <= p - 1; ++l)
    if (nu[l - 1] <= 0.0 || taper[l - 1] == 0.0) Lhat = l;
  res.k_hat = p - 1 - Lhat;
  res.sigma_hat = scale_subdiagonals(S, taper);
  res.taper = std::move(taper);
  res.nu = std::move(nu);
  res.primal_obj = cert.primal;
  res.dual_gap = cert.gap;
  res.sweeps = sweeps;
  return res;
}

}  // namespace

double h_eval(double nu, int level, std::span<const double> rnorms, const WeightScheme& w) {
  if (level < 1 || level > w.dim() - 1) throw std::invalid_argument("h_eval: level out of range");
  if (static_cast<int>(rnorms.size()) < level) throw std::invalid_argument("h_eval: need r_1..r_level");
  LevelTerms t = collect_terms(level, rnorms, w);
  if (!t.w2.empty() && nu <= -t.w2min)
    throw std::domain_error("h_eval: nu at or beyond the pole -min w_lm^2");
  return t.h(nu);
}

double solve_nu(int level, std::span<const double> rnorms, const WeightScheme& w, double lambda,
                double root_tol) {
  if (level < 1 || level > w.dim() - 1) throw std::invalid_argument("solve_nu: level out of range");
  if (static_cast<int>(rnorms.size()) < level) throw std::invalid_argument("solve_nu: need r_1..r_level");
  if (!(lambda > 0)) throw std::invalid_argument("solve_nu: lambda must be positive");
  LevelTerms t = collect_terms(level, rnorms, w);
  return solve_level(t, w.level_weight(level), lambda, root_tol, kInf);
}

FitResult fit(const SymMatrix& S, const FitConfig& cfg, DualState* dual) {
  const int p = S.dim();
  if (cfg.scheme.dim() != p) throw std::invalid_argument("fit: scheme dimension mismatch");
  if (cfg.lambda < 0) throw std::invalid_argument("fit: lambda must be >= 0");
  if (!S.all_finite()) throw std::invalid_argument("fit: non-finite input");

  const double lambda = cfg.lambda;
  if (p == 1 || lambda == 0.0) {
    FitResult res;
    res.sigma_hat = S;
    res.k_hat = p - 1;
    res.nu.assign(p - 1, kInf);
    res.taper.assign(p - 1, 1.0);
    res.sweeps = 0;
    if (dual) {
      dual->block_scale.assign(p - 1, {});
      for (int l = 1; l <= p - 1; ++l) dual->block_scale[l - 1].assign(l, 0.0);
      dual->feasibility.assign(p - 1, 0.0);
      dual->gap = 0.0;
    }
    return res;
  }

  std::vector<double> b = subdiag_norms(S);
  b.resize(p - 1);

  BlockScales a(p);
  std::vector<double> tot(p - 1, 0.0);  // lambda * sum_l w_lm a_lm
  std::vector<double> nu(p - 1, kInf);
  std::vector<double> rho(p - 1), rn(p - 1);

  Certificate cert;
  int sweeps = 0;
  for (; sweeps < cfg.max_sweeps;) {
    ++sweeps;
    for (int l = 1; l <= p - 1; ++l) {
      double* al = a.row(l);
      LevelTerms terms;
      terms.w2.reserve(l);
      terms.s2.reserve(l);
      for (int m = 1; m <= l; ++m) {
        double wm = cfg.scheme.weight(l, m);
        rho[m - 1] = 1.0 - (tot[m - 1] - lambda * wm * al[m - 1]);
        rn[m - 1] = std::abs(rho[m - 1]) * b[m - 1];
        if (wm > 0.0 && rn[m - 1] > 0.0) {
          double w2 = wm * wm;
          double s2 = w2 * rn[m - 1] * rn[m - 1];
          terms.w2.push_back(w2);
          terms.s2.push_back(s2);
          terms.q2 += s2;
          terms.w2min = std::min(terms.w2min, w2);
        }
      }
      double warm = sweeps > 1 ? nu[l - 1] : kInf;
      double nl = solve_level(terms, cfg.scheme.level_weight(l), lambda, cfg.root_tol, warm);
      nu[l - 1] = nl;
      double nup = std::max(nl, 0.0);
      for (int m = 1; m <= l; ++m) {
        double wm = cfg.scheme.weight(l, m);
        double anew = wm > 0.0 ? wm * rho[m - 1] / (lambda * (wm * wm + nup)) : 0.0;
        tot[m - 1] += lambda * wm * (anew - al[m - 1]);
        al[m - 1] = anew;
      }
    }
    std::vector<double> taper(p - 1);
    for (int m = 0; m < p - 1; ++m) taper[m] = 1.0 - tot[m];
    cert = certificate(b, taper, a, cfg.scheme, lambda);
    if (cert.gap <= cfg.gap_rtol * (1.0 + std::abs(cert.primal))) break;
    if (sweeps == cfg.max_sweeps) {
      std::ostringstream os;
      os << "fit: duality gap " << cert.gap << " above tolerance after " << sweeps
         << " sweeps (lambda=" << lambda << ", p=" << p << ")";
      throw numerical_error(os.str());
    }
  }

  std::vector<double> taper(p - 1);
  for (int m = 0; m < p - 1; ++m) taper[m] = 1.0 - tot[m];
  if (dual) {
    dual->block_scale.assign(p - 1, {});
    for (int l = 1; l <= p - 1; ++l) dual->block_scale[l - 1].assign(a.row(l), a.row(l) + l);
    dual->feasibility = cert.feasibility;
    dual->gap = cert.gap;
  }
  return finalize(S, b, std::move(taper), std::move(nu), cert, cfg.zero_tol, sweeps);
}

FitResult fit_simple(const SymMatrix& S, double lambda, double zero_tol) {
  const int p = S.dim();
  if (lambda < 0) throw std::invalid_argument("fit_simple: lambda must be >= 0");
  WeightScheme scheme = WeightScheme::basic_hier(p);
  if (p == 1 || lambda == 0.0) {
    FitConfig cfg(0.0, scheme);
    return fit(S, cfg);
  }
  std::vector<double> b = subdiag_norms(S);
  b.resize(p - 1);

  // Outermost-in group soft-thresholding, tracked as one scale per subdiagonal.
  std::vector<double> t(p - 1, 1.0), nu(p - 1, 0.0), factor(p - 1, 1.0);
  for (int l = 1; l <= p - 1; ++l) {
    double g2 = 0.0;
    for (int m = 1; m <= l; ++m) {
      double v = t[m - 1] * b[m - 1];
      g2 += v * v;
    }
    double g = std::sqrt(g2);
    double wl = std::sqrt(2.0 * l);
    nu[l - 1] = g > 0.0 ? wl * (g / lambda - wl) : -wl * wl;
    double f = g > lambda * wl ? 1.0 - lambda * wl / g : 0.0;
    factor[l - 1] = f;
    for (int m = 1; m <= l; ++m) t[m - 1] *= f;
  }

  // Replay the cascade to recover the implied dual blocks for the certificate.
  BlockScales a(p);
  std::vector<double> u(p - 1, 1.0);
  for (int l = 1; l <= p - 1; ++l) {
    double wl = std::sqrt(2.0 * l);
    double nup = std::max(nu[l - 1], 0.0);
    double* al = a.row(l);
    for (int m = 1; m <= l; ++m) {
      al[m - 1] = wl * u[m - 1] / (lambda * (wl * wl + nup));
      u[m - 1] *= factor[l - 1];
    }
  }
  Certificate cert = certificate(b, t, a, scheme, lambda);
  return finalize(S, b, std::move(t), std::move(nu), cert, zero_tol, 1);
}

double lambda_max(const SymMatrix& S, const WeightScheme& w) {
  const int p = S.dim();
  if (p == 1) return 0.0;
  std::vector<double> b = subdiag_norms(S);
  double lmax = 0.0;
  for (int l = 1; l <= p - 1; ++l) lmax = std::max(lmax, b[l - 1] / w.level_weight(l));
  return lmax;
}

std::vector<double> taper_of(const FitResult& fit) { return fit.taper; }

SymMatrix reconstruct(const SymMatrix& S, const std::vector<double>& taper) {
  return scale_subdiagonals(S, taper);
}

SymMatrix fixed_band(const SymMatrix& S, int K) {
  const int p = S.dim();
  if (K < 0 || K > p - 1) throw std::invalid_argument("fixed_band: K out of range");
  std::vector<double> coeff(p - 1, 0.0);
  for (int m = 1; m <= p - 1; ++m) coeff[m - 1] = (p - m <= K) ? 1.0 : 0.0;
  return scale_subdiagonals(S, coeff);
}

std::vector<double> make_lambda_grid(double lmax, int count, double ratio) {
  if (count < 1) throw std::invalid_argument("make_lambda_grid: count must be >= 1");
  if (!(ratio > 0) || ratio > 1) throw std::invalid_argument("make_lambda_grid: ratio must be in (0,1]");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lmax;
    return grid;
  }
  for (int i = 0; i < count; ++i) grid[i] = lmax * std::pow(ratio, static_cast<double>(i) / (count - 1));
  return grid;
}

std::vector<FitResult> path(const SymMatrix& S, const std::vector<double>& grid, const WeightScheme& w) {
  if (grid.empty()) throw std::invalid_argument("path: empty grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] > grid[i - 1]) throw std::invalid_argument("path: grid must be sorted descending");
  std::vector<FitResult> out;
  out.reserve(grid.size());
  for (double lam : grid) {
    FitConfig cfg(lam, w);
    out.push_back(fit(S, cfg));
  }
  return out;
}

}  // namespace hierband
