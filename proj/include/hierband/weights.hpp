#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hierband/sym_matrix.hpp"

namespace hierband {

enum class WeightKind { GroupLasso, BasicHier, GeneralHier, Custom };

/// The weight sequence w_{lm}, 1 <= m <= l <= p-1, for the three built-in
/// schemes plus user tables.  Built-in weights are evaluated on demand from
/// their closed forms; no p x p matrices are ever materialized.
///
/// All schemes satisfy w_{ll} = max_{m<=l} w_{lm} = sqrt(2l); user tables
/// are validated for that property and rejected on violation.
class WeightScheme {
 public:
  static WeightScheme group_lasso(int p) { return WeightScheme(WeightKind::GroupLasso, p); }
  static WeightScheme basic_hier(int p) { return WeightScheme(WeightKind::BasicHier, p); }
  static WeightScheme general_hier(int p) { return WeightScheme(WeightKind::GeneralHier, p); }

  /// table[l-1][m-1] for 1 <= m <= l <= p-1.
  static WeightScheme custom(int p, std::vector<std::vector<double>> table);

  /// Parse one of "group" / "simple" / "general".
  static WeightScheme named(const std::string& name, int p);

  double weight(int l, int m) const {
    switch (kind_) {
      case WeightKind::GroupLasso:
        return l == m ? std::sqrt(2.0 * l) : 0.0;
      case WeightKind::BasicHier:
        return std::sqrt(2.0 * l);
      case WeightKind::GeneralHier:
        return std::sqrt(2.0 * l) / (l - m + 1);
      case WeightKind::Custom:
        return table_[l - 1][m - 1];
    }
    return 0.0;
  }

  /// w_l := w_{ll} = sqrt(2l).
  double level_weight(int l) const { return weight(l, l); }

  /// Net weight applied to subdiagonal m: sum_{l=m}^{p-1} w_{lm}^2.
  double net_weight(int m) const;

  WeightKind kind() const { return kind_; }
  int dim() const { return p_; }
  std::string name() const;

  /// True when the scheme has w_{lm} > 0 for every m <= l (zeros then
  /// propagate away from the diagonal in the estimator).
  bool hierarchical() const;

 private:
  WeightScheme(WeightKind k, int p) : kind_(k), p_(p) {
    if (p < 1) throw std::invalid_argument("WeightScheme: p must be >= 1");
  }
  WeightKind kind_;
  int p_;
  std::vector<std::vector<double>> table_;
};

}  // namespace hierband
