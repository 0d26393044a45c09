#include "zogd/schedules.hpp"

#include <cmath>
#include <doctest.h>

#include "zogd/errors.hpp"
#include "zogd/sampling.hpp"
#include "zogd/theory.hpp"

using namespace zogd;

TEST_SUITE_BEGIN("schedules");

TEST_CASE("accumulation scale worked values") {
  // delta = 2/e makes tau = 1 exactly up to rounding.
  const double delta = 2.0 / std::exp(1.0);
  const AccumulationScale scale = accumulation_scale(4, 25, delta, 1.0, 4.0);
  CHECK(scale.tau_delta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(scale.U_T == doctest::Approx(122.0).epsilon(1e-12));
  CHECK(scale.A_alpha_T == doctest::Approx(122.0).epsilon(1e-12));

  // delta -> 1 limit: tau -> log 2.
  const AccumulationScale near_one =
      accumulation_scale(4, 25, 1.0 - 1e-12, 1.0, 4.0);
  const double dT = 100.0;
  const double expected_U =
      dT + 2.0 * std::sqrt(dT * std::log(2.0)) + 2.0 * std::log(2.0);
  CHECK(near_one.tau_delta == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(near_one.U_T == doctest::Approx(expected_U).epsilon(1e-9));

  CHECK_THROWS_AS(accumulation_scale(0, 25, 0.1, 1.0, 1.0),
                  InvalidInputError);
  CHECK_THROWS_AS(accumulation_scale(4, 25, 1.2, 1.0, 1.0),
                  InvalidInputError);
}

TEST_CASE("strongly convex schedule reproduces the pinned horizon") {
  const ScheduleReport report = sc_schedule(10, 1.0, 0.1, 1.0, 1e-3, 0.1);
  CHECK(report.T == 12203);
  // Independent extended-precision recomputation of the horizon formula.
  const long double T_raw =
      1600.0L * std::log(2000.0L) + 12.0L * std::log(30.0L);
  CHECK(report.T_raw ==
        doctest::Approx(static_cast<double>(T_raw)).epsilon(1e-12));
  CHECK(report.T == static_cast<long>(std::ceil(static_cast<double>(T_raw))));

  // alpha makes the smoothing term epsilon/2 and respects the cap.
  const double C =
      sc_smoothing_coefficient(10, 1.0, 0.1, report.T, 0.1);
  const double smoothing =
      10.0 * 1.0 * report.alpha * report.alpha / 16.0 * C;
  CHECK(smoothing <= 0.5e-3 * (1.0 + 1e-12));
  CHECK(report.alpha == std::min(report.alpha_solved, report.alpha_cap));
  CHECK(report.alpha_cap == doctest::Approx(1e-3).epsilon(1e-14));
}

TEST_CASE("strongly convex schedule, kappa = 1 worked example") {
  const double delta = 0.1, epsilon = 0.25;
  const ScheduleReport report =
      sc_schedule(1, 1.0, 1.0, 2.0 * epsilon, epsilon, delta);
  const double expected =
      16.0 * std::log(4.0) + 12.0 * std::log(3.0 / delta);
  CHECK(report.T_raw == doctest::Approx(expected).epsilon(1e-12));
  CHECK(report.T == static_cast<long>(std::ceil(expected)));
}

TEST_CASE("convex schedule reproduces the pinned horizon") {
  const ScheduleReport report = cvx_schedule(2, 1.0, 1.0, 0.5, 0.1);
  CHECK(report.T == 2120);
  // alpha solves A_alpha_T = epsilon / 4.
  CHECK(report.scale.A_alpha_T == doctest::Approx(0.125).epsilon(1e-10));
  CHECK_FALSE(report.trivial);

  const ScheduleReport trivial = cvx_schedule(2, 1.0, 0.0, 0.5, 0.1);
  CHECK(trivial.trivial);
  CHECK(trivial.T == 0);

  CHECK_THROWS_AS(cvx_schedule(2, 1.0, -1.0, 0.5, 0.1), InvalidInputError);
}

TEST_CASE("nonconvex schedule reproduces the pinned horizon") {
  const double delta = 2.0 / std::exp(1.0);
  const ScheduleReport report = nc_schedule(2, 1.0, 1.0, 1.0, delta);
  CHECK(report.T == 160);
  // alpha solves A_alpha_T = Delta0.
  CHECK(report.scale.A_alpha_T == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.B_alpha_T ==
        doctest::Approx(2.0 * (1.0 + report.scale.A_alpha_T)).epsilon(1e-10));

  // Halving epsilon doubles the pre-ceiling horizon exactly.
  const ScheduleReport full = nc_schedule(3, 1.0, 2.0, 1.0, 0.1);
  const ScheduleReport half = nc_schedule(3, 1.0, 2.0, 0.5, 0.1);
  CHECK(half.T_raw == 2.0 * full.T_raw);

  CHECK_THROWS_AS(nc_schedule(2, 1.0, 1.0, 0.0, 0.1), InvalidInputError);
  const ScheduleReport stationary = nc_schedule(2, 1.0, 0.0, 1.0, 0.1);
  CHECK(stationary.trivial);
}

TEST_CASE("markov baselines match their order-level formulas") {
  const MarkovBaseline sc =
      markov_baseline(Regime::strongly_convex, 10, 1.0, 0.1, 1.0, 1e-3, 0.1);
  CHECK(sc.N == doctest::Approx(100.0 * std::log(1e4)).epsilon(1e-12));
  CHECK(sc.alpha == doctest::Approx(std::sqrt(1e-5) / 10.0).epsilon(1e-12));

  // The Markov radius shrinks by exactly sqrt(delta) against the
  // expectation-level scale.
  const double leading = std::sqrt(1e-3 * 0.1) / 10.0;
  CHECK(sc.alpha / leading == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));

  // 1/delta scaling in the convex count.
  const MarkovBaseline tight =
      markov_baseline(Regime::convex, 5, 2.0, 0.0, 1.5, 0.2, 0.01);
  const MarkovBaseline loose =
      markov_baseline(Regime::convex, 5, 2.0, 0.0, 1.5, 0.2, 1.0);
  CHECK(tight.N / loose.N == doctest::Approx(100.0).epsilon(1e-12));

  const MarkovBaseline nc =
      markov_baseline(Regime::nonconvex, 4, 1.0, 0.0, 2.0, 0.5, 0.1);
  CHECK(nc.N == doctest::Approx(4.0 * 2.0 / 0.05).epsilon(1e-12));
  CHECK(nc.alpha ==
        doctest::Approx(std::sqrt(0.05) / (8.0 * 1.0)).epsilon(1e-12));
}

TEST_CASE("horizons shrink with epsilon and grow with confidence") {
  const ScheduleReport sc_loose = sc_schedule(5, 1.0, 0.2, 1.0, 1e-2, 0.1);
  const ScheduleReport sc_tight = sc_schedule(5, 1.0, 0.2, 1.0, 1e-4, 0.1);
  CHECK(sc_tight.T >= sc_loose.T);
  const ScheduleReport sc_confident = sc_schedule(5, 1.0, 0.2, 1.0, 1e-2, 0.01);
  CHECK(sc_confident.T >= sc_loose.T);

  const ScheduleReport cvx_loose = cvx_schedule(5, 1.0, 1.0, 0.5, 0.1);
  const ScheduleReport cvx_tight = cvx_schedule(5, 1.0, 1.0, 0.05, 0.1);
  CHECK(cvx_tight.T >= cvx_loose.T);

  const ScheduleReport nc_loose = nc_schedule(5, 1.0, 1.0, 1.0, 0.1);
  const ScheduleReport nc_tight = nc_schedule(5, 1.0, 1.0, 0.1, 0.1);
  CHECK(nc_tight.T >= nc_loose.T);
}

TEST_CASE("smoothing radii shrink with dimension and horizon") {
  const ScheduleReport small_d = sc_schedule(5, 1.0, 0.2, 1.0, 1e-3, 0.1);
  const ScheduleReport large_d = sc_schedule(50, 1.0, 0.2, 1.0, 1e-3, 0.1);
  CHECK(large_d.alpha <= small_d.alpha);

  const ScheduleReport cvx_small = cvx_schedule(5, 1.0, 1.0, 0.5, 0.1);
  const ScheduleReport cvx_large = cvx_schedule(50, 1.0, 1.0, 0.5, 0.1);
  CHECK(cvx_large.alpha <= cvx_small.alpha);

  // Directly in T through the accumulation scale.
  const double a_short = 2.0 * std::sqrt(0.5 / accumulation_scale(
                                                   5, 100, 0.1, 1.0, 1.0)
                                             .U_T);
  const double a_long = 2.0 * std::sqrt(0.5 / accumulation_scale(
                                                  5, 200, 0.1, 1.0, 1.0)
                                            .U_T);
  CHECK(a_long <= a_short);
}

TEST_CASE("horizon formula survives extended-precision recomputation") {
  SeedStream stream{515, 0, 0};
  for (int trial = 0; trial < 100; ++trial) {
    const Direction noise = sample_direction(stream, 6);
    const int d = 1 + static_cast<int>(std::fabs(noise.u[0]) * 40.0);
    const double L = 0.2 + std::fabs(noise.u[1]);
    const double mu = L * (0.02 + 0.9 / (1.0 + noise.u[2] * noise.u[2]));
    const double Delta0 = 0.1 + std::fabs(noise.u[3]);
    const double epsilon = 1e-4 * (1.0 + 10.0 * std::fabs(noise.u[4]));
    const double delta = 0.02 + 0.4 / (1.0 + noise.u[5] * noise.u[5]);

    const ScheduleReport report =
        sc_schedule(d, L, mu, Delta0, epsilon, delta);
    const long double reference =
        (16.0L * d * static_cast<long double>(L) / mu) *
            std::log(2.0L * static_cast<long double>(Delta0) / epsilon) +
        12.0L * std::log(3.0L / static_cast<long double>(delta));
    CHECK(std::fabs(report.T_raw - static_cast<double>(reference)) <=
          1e-9 * std::fabs(static_cast<double>(reference)));
  }
}

TEST_CASE("schedule report serializes every intermediate") {
  const nlohmann::json j =
      schedule_report_json(sc_schedule(10, 1.0, 0.1, 1.0, 1e-3, 0.1));
  for (const char* key :
       {"tau_delta", "U_T", "A_alpha_T", "T_raw", "T", "alpha", "baseline_N",
        "baseline_alpha", "alpha_solved", "alpha_cap", "regime", "notes"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["T"] == 12203);
}

TEST_CASE("comparison table structure and ratio columns") {
  const ComparisonTable table =
      comparison_table(10, 1.0, 0.1, 1.0, 1.0, 1e-3, 0.1);
  CHECK(table.rows.size() == 9);
  CHECK(table.sc_alpha_ratio_markov_over_ours ==
        doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
  CHECK(table.nc_alpha_ratio_ours_over_expectation ==
        doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));

  const std::string csv = comparison_table_csv(table);
  CHECK(csv.rfind("regime,method,queries,alpha\n", 0) == 0);
  const nlohmann::json j = comparison_table_json(table);
  CHECK(j["rows"].size() == 9);
}

TEST_SUITE_END();
