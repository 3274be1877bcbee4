// Compares the OpenMP kernels against the serial reference implementations:
// wall time, speedup, and max absolute disagreement (expected 0 — the
// parallel kernels partition work without changing accumulation order).

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>

#include "hierband/kernels.hpp"
#include "hierband/norms.hpp"
#include "hierband/rng.hpp"
#include "hierband/sim.hpp"
#include "hierband/solver.hpp"

using namespace hierband;

namespace {

double time_of(const std::function<void()>& f, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (el < best) best = el;
  }
  return best;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double m = 0.0;
  size_t nn = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < nn; ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void row(const char* name, double serial, double parallel, double diff) {
  std::printf("%-24s %10.1f ms %10.1f ms %8.2fx %12.3g\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int n = quick ? 100 : 400;
  const int p = quick ? 150 : 1200;
  const int repeats = quick ? 1 : 3;

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-24s %13s %13s %9s %12s\n", "kernel", "serial", "openmp", "speedup", "max|diff|");

  SymMatrix sigma = make_cov(CovModel::ma(p, std::min(20, p - 1)));
  DataMatrix X = sample_gaussian(sigma, n, 42);

  SymMatrix s_serial, s_par;
  double t_ser = time_of([&] { s_serial = serial::sample_covariance(X); }, repeats);
  double t_par = time_of([&] { s_par = sample_covariance(X); }, repeats);
  row("sample_covariance", t_ser, t_par, max_abs_diff(s_serial, s_par));

  std::vector<double> b_ser, b_par;
  t_ser = time_of([&] { b_ser = serial::subdiag_norms(s_serial); }, repeats);
  t_par = time_of([&] { b_par = subdiag_norms(s_par); }, repeats);
  row("subdiag_norms", t_ser, t_par, max_abs_diff(b_ser, b_par));

  std::vector<double> v(p), y_ser, y_par;
  Rng rng(7);
  for (int i = 0; i < p; ++i) v[i] = rng.normal();
  t_ser = time_of([&] { serial::symv(s_serial, v, y_ser); }, repeats * 10);
  t_par = time_of([&] { symv(s_par, v, y_par); }, repeats * 10);
  row("symv", t_ser, t_par, max_abs_diff(y_ser, y_par));

  std::vector<double> coeff(p - 1);
  for (int m = 0; m < p - 1; ++m) coeff[m] = 1.0 / (1.0 + m);
  SymMatrix r_ser, r_par;
  t_ser = time_of([&] { r_ser = serial::scale_subdiagonals(s_serial, coeff); }, repeats);
  t_par = time_of([&] { r_par = scale_subdiagonals(s_par, coeff); }, repeats);
  row("scale_subdiagonals", t_ser, t_par, max_abs_diff(r_ser, r_par));

  // end-to-end fit timing for context (sequential in the level index)
  double lam = 2.0 * std::sqrt(std::log((double)p) / n);
  FitConfig cfg(lam, WeightScheme::general_hier(p));
  double t_fit = time_of([&] { (void)fit(s_par, cfg); }, 1);
  std::printf("%-24s %10.1f ms   (general weights, lambda=%.4f)\n", "fit (end to end)", t_fit * 1e3, lam);
  return 0;
}
