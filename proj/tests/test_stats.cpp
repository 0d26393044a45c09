#include "zogd/stats.hpp"

#include <cmath>
#include <doctest.h>
#include <vector>

#include "zogd/errors.hpp"

using namespace zogd;

TEST_SUITE_BEGIN("stats");

TEST_CASE("regularized incomplete beta against closed forms") {
  // I_x(1/2, 1/2) = (2/pi) asin(sqrt(x))
  CHECK(regularized_incomplete_beta(0.25, 0.5, 0.5) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // I_x(1, b) = 1 - (1-x)^b
  CHECK(regularized_incomplete_beta(0.3, 1.0, 2.5) ==
        doctest::Approx(1.0 - std::pow(0.7, 2.5)).epsilon(1e-12));
  // I_x(a, 1) = x^a
  CHECK(regularized_incomplete_beta(0.7, 3.0, 1.0) ==
        doctest::Approx(std::pow(0.7, 3.0)).epsilon(1e-12));
}

TEST_CASE("incomplete beta endpoints, symmetry, monotonicity") {
  CHECK(regularized_incomplete_beta(0.0, 0.5, 4.5) == 0.0);
  CHECK(regularized_incomplete_beta(1.0, 0.5, 4.5) == 1.0);
  for (const double x : {0.01, 0.2, 0.5, 0.8, 0.99}) {
    const double direct = regularized_incomplete_beta(x, 0.5, 4.5);
    const double mirrored =
        1.0 - regularized_incomplete_beta(1.0 - x, 4.5, 0.5);
    CHECK(direct == doctest::Approx(mirrored).epsilon(1e-12));
  }
  double prev = 0.0;
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double value = regularized_incomplete_beta(x, 0.5, 49.5);
    CHECK(value >= prev);
    prev = value;
  }
}

TEST_CASE("incomplete beta rejects bad arguments") {
  CHECK_THROWS_AS(regularized_incomplete_beta(-0.1, 1.0, 1.0),
                  InvalidInputError);
  CHECK_THROWS_AS(regularized_incomplete_beta(0.5, 0.0, 1.0),
                  InvalidInputError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.5, 1.0, 1.0),
                  InvalidInputError);
}

TEST_CASE("ks statistic of a perfect grid is 1/(2n)") {
  const int n = 1000;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = (i + 0.5) / n;
  const double stat = ks_statistic(grid, [](double x) { return x; });
  CHECK(stat == doctest::Approx(0.5 / n).epsilon(1e-9));

  // A shifted sample must register a large distance.
  std::vector<double> shifted(n);
  for (int i = 0; i < n; ++i) shifted[i] = 0.5 + 0.5 * (i + 0.5) / n;
  CHECK(ks_statistic(shifted, [](double x) { return x; }) > 0.4);
}

TEST_SUITE_END();
