#include "hierband/sym_matrix.hpp"

#include <cmath>

namespace hierband {

bool SymMatrix::all_finite() const {
  for (double v : a_)
    if (!std::isfinite(v)) return false;
  return true;
}

std::vector<std::pair<int, int>> subdiag_indices(int p, int m) {
  check_level(p, m);
  int d = subdiag_offset(p, m);
  std::vector<std::pair<int, int>> out;
  out.reserve(subdiag_size(p, m));
  // Row-major over the full matrix: row i contributes (i, i-d) then (i, i+d).
  for (int i = 0; i < p; ++i) {
    if (d == 0) {
      out.emplace_back(i + 1, i + 1);
      continue;
    }
    if (i - d >= 0) out.emplace_back(i + 1, i - d + 1);
    if (i + d < p) out.emplace_back(i + 1, i + d + 1);
  }
  return out;
}

}  // namespace hierband
