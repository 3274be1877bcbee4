#include "hierband/weights.hpp"

#include <cmath>

namespace hierband {

WeightScheme WeightScheme::custom(int p, std::vector<std::vector<double>> table) {
  WeightScheme w(WeightKind::Custom, p);
  if (static_cast<int>(table.size()) != p - 1)
    throw std::invalid_argument("custom weights: table must have p-1 rows");
  for (int l = 1; l <= p - 1; ++l) {
    if (static_cast<int>(table[l - 1].size()) != l)
      throw std::invalid_argument("custom weights: row " + std::to_string(l) + " must have " + std::to_string(l) + " entries");
    double wll = table[l - 1][l - 1];
    if (!(wll > 0) || !std::isfinite(wll))
      throw std::invalid_argument("custom weights: w_ll must be positive and finite at l=" + std::to_string(l));
    for (int m = 1; m <= l; ++m) {
      double v = table[l - 1][m - 1];
      if (v < 0 || !std::isfinite(v))
        throw std::invalid_argument("custom weights: negative or non-finite entry at l=" + std::to_string(l) + ", m=" + std::to_string(m));
      if (v > wll * (1.0 + 1e-12))
        throw std::invalid_argument("custom weights: w_ll must dominate row l=" + std::to_string(l) +
                                    " (violated at m=" + std::to_string(m) + ")");
    }
  }
  w.table_ = std::move(table);
  return w;
}

WeightScheme WeightScheme::named(const std::string& name, int p) {
  if (name == "group") return group_lasso(p);
  if (name == "simple") return basic_hier(p);
  if (name == "general") return general_hier(p);
  throw std::invalid_argument("unknown weight scheme: " + name + " (expected group|simple|general)");
}

double WeightScheme::net_weight(int m) const {
  if (m < 1 || m > p_ - 1) throw std::invalid_argument("net_weight: m out of range");
  double s = 0.0;
  for (int l = m; l <= p_ - 1; ++l) {
    double w = weight(l, m);
    s += w * w;
  }
  return s;
}

std::string WeightScheme::name() const {
  switch (kind_) {
    case WeightKind::GroupLasso: return "group";
    case WeightKind::BasicHier: return "simple";
    case WeightKind::GeneralHier: return "general";
    case WeightKind::Custom: return "custom";
  }
  return "?";
}

bool WeightScheme::hierarchical() const {
  if (kind_ == WeightKind::BasicHier || kind_ == WeightKind::GeneralHier) return true;
  if (kind_ == WeightKind::GroupLasso) return false;
  for (int l = 1; l <= p_ - 1; ++l)
    for (int m = 1; m <= l; ++m)
      if (!(table_[l - 1][m - 1] > 0)) return false;
  return true;
}

}  // namespace hierband
