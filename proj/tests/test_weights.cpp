#include <doctest.h>

#include <cmath>

#include "hierband/weights.hpp"

using namespace hierband;

TEST_CASE("weight values of the three schemes") {
  WeightScheme gen = WeightScheme::general_hier(10);
  CHECK(gen.weight(3, 3) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(gen.weight(3, 1) == doctest::Approx(std::sqrt(6.0) / 3.0).epsilon(1e-15));

  WeightScheme grp = WeightScheme::group_lasso(10);
  CHECK(grp.weight(3, 1) == 0.0);
  CHECK(grp.weight(3, 3) == doctest::Approx(std::sqrt(6.0)));

  WeightScheme bas = WeightScheme::basic_hier(10);
  CHECK(bas.weight(5, 1) == doctest::Approx(std::sqrt(10.0)));
  CHECK(bas.weight(5, 5) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("every scheme pins w_ll = sqrt(2l)") {
  for (auto w : {WeightScheme::group_lasso(12), WeightScheme::basic_hier(12), WeightScheme::general_hier(12)})
    for (int l = 1; l <= 11; ++l) CHECK(w.level_weight(l) == doctest::Approx(std::sqrt(2.0 * l)).epsilon(1e-15));
}

TEST_CASE("general weights are nondecreasing in m and dominate the next level") {
  WeightScheme gen = WeightScheme::general_hier(15);
  for (int l = 2; l <= 14; ++l)
    for (int m = 2; m <= l; ++m) CHECK(gen.weight(l, m) >= gen.weight(l, m - 1));
  // w_ll >= w_{l+1,l} > 0 holds for the general scheme; the basic scheme has
  // w_{l+1,l} = sqrt(2(l+1)) > w_ll, so only positivity applies there.
  for (int l = 1; l <= 13; ++l) {
    CHECK(gen.weight(l, l) >= gen.weight(l + 1, l));
    CHECK(gen.weight(l + 1, l) > 0.0);
    CHECK(WeightScheme::basic_hier(15).weight(l + 1, l) > 0.0);
  }
}

TEST_CASE("net weight per subdiagonal") {
  WeightScheme grp = WeightScheme::group_lasso(9);
  for (int m = 1; m <= 8; ++m) CHECK(grp.net_weight(m) == doctest::Approx(2.0 * m).epsilon(1e-12));

  WeightScheme gen4 = WeightScheme::general_hier(4);
  CHECK(gen4.net_weight(3) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(gen4.net_weight(1) == doctest::Approx(2.0 + 1.0 + 6.0 / 9.0).epsilon(1e-12));

  CHECK_THROWS_AS(gen4.net_weight(0), std::invalid_argument);
  CHECK_THROWS_AS(gen4.net_weight(4), std::invalid_argument);
}

TEST_CASE("custom tables are validated, not renormalized") {
  // valid: w_ll dominates each row
  std::vector<std::vector<double>> ok = {{1.0}, {0.5, 2.0}, {0.1, 0.2, 3.0}};
  WeightScheme w = WeightScheme::custom(4, ok);
  CHECK(w.weight(2, 1) == 0.5);
  CHECK(w.weight(3, 3) == 3.0);
  CHECK(w.hierarchical());

  std::vector<std::vector<double>> bad = {{1.0}, {2.5, 2.0}, {0.1, 0.2, 3.0}};
  CHECK_THROWS_AS(WeightScheme::custom(4, bad), std::invalid_argument);

  std::vector<std::vector<double>> zero_diag = {{0.0}, {0.5, 2.0}, {0.1, 0.2, 3.0}};
  CHECK_THROWS_AS(WeightScheme::custom(4, zero_diag), std::invalid_argument);

  std::vector<std::vector<double>> with_zero = {{1.0}, {0.0, 2.0}, {0.1, 0.2, 3.0}};
  CHECK_FALSE(WeightScheme::custom(4, with_zero).hierarchical());
}

TEST_CASE("scheme names parse") {
  CHECK(WeightScheme::named("group", 5).kind() == WeightKind::GroupLasso);
  CHECK(WeightScheme::named("simple", 5).kind() == WeightKind::BasicHier);
  CHECK(WeightScheme::named("general", 5).kind() == WeightKind::GeneralHier);
  CHECK_THROWS_AS(WeightScheme::named("fancy", 5), std::invalid_argument);
}
