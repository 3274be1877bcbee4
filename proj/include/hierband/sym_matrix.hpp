#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hierband {

// Thrown when an algorithm fails for numerical reasons (bracket failure,
// non-convergence, indefinite inputs).  Carries context assembled by the
// caller.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense symmetric p x p matrix.  Symmetry is enforced by construction:
/// writes go through set(), which mirrors the entry.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int p, double fill = 0.0) : p_(p), a_(static_cast<size_t>(p) * p, fill) {
    if (p < 1) throw std::invalid_argument("SymMatrix: p must be >= 1");
  }

  int dim() const { return p_; }

  double operator()(int j, int k) const { return a_[static_cast<size_t>(j) * p_ + k]; }

  void set(int j, int k, double v) {
    a_[static_cast<size_t>(j) * p_ + k] = v;
    a_[static_cast<size_t>(k) * p_ + j] = v;
  }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  static SymMatrix identity(int p) {
    SymMatrix m(p);
    for (int j = 0; j < p; ++j) m.set(j, j, 1.0);
    return m;
  }

  bool all_finite() const;

 private:
  int p_ = 0;
  std::vector<double> a_;
};

/// n observations of dimension p, row-major.
struct DataMatrix {
  int n = 0;
  int p = 0;
  std::vector<double> x;  // n*p, row-major

  DataMatrix() = default;
  DataMatrix(int n_, int p_) : n(n_), p(p_), x(static_cast<size_t>(n_) * p_, 0.0) {
    if (n_ < 1 || p_ < 1) throw std::invalid_argument("DataMatrix: n, p must be >= 1");
  }
  double& at(int i, int j) { return x[static_cast<size_t>(i) * p + j]; }
  double at(int i, int j) const { return x[static_cast<size_t>(i) * p + j]; }
};

// ---- Subdiagonal index geometry -------------------------------------------
//
// Levels are counted from the matrix corners inward: level m (1 <= m <= p)
// collects the positions at distance p - m from the main diagonal, so
// |s_m| = 2m off the diagonal and s_p is the diagonal itself.  These
// functions are the only 1-based boundary of the library; they match the
// notation used in the docs.  Everything else indexes from 0.

inline int subdiag_offset(int p, int m) { return p - m; }

inline int subdiag_size(int p, int m) { return m == p ? p : 2 * m; }

inline void check_level(int p, int m) {
  if (m < 1 || m > p) throw std::invalid_argument("subdiagonal level out of range: m=" + std::to_string(m) + ", p=" + std::to_string(p));
}

/// Index pairs (1-based, row-major order) of level m.
std::vector<std::pair<int, int>> subdiag_indices(int p, int m);

}  // namespace hierband
