#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "zogd/oracles.hpp"

namespace zogd {

/// The shared accumulation quantities:
///   tau_delta = log(2/delta)
///   U_T       = dT + 2 sqrt(dT tau_delta) + 2 tau_delta
///   A_alpha_T = L alpha^2 U_T / 16
struct AccumulationScale {
  double tau_delta = 0.0;
  double U_T = 0.0;
  double A_alpha_T = 0.0;
};

AccumulationScale accumulation_scale(int d, long T, double delta, double L,
                                     double alpha);

/// Order-level expectation-to-probability conversion baseline, constant 1.
struct MarkovBaseline {
  double N = 0.0;
  double alpha = 0.0;
};

MarkovBaseline markov_baseline(Regime regime, int d, double L, double mu,
                               double R_or_Delta0, double epsilon,
                               double delta);

/// Admissible (T, alpha) for one regime, with every intermediate retained.
struct ScheduleReport {
  Regime regime = Regime::strongly_convex;
  long T = 0;
  double T_raw = 0.0;
  double alpha = 0.0;
  AccumulationScale scale;  // evaluated at the final (T, alpha)
  double alpha_solved = 0.0;  // numerically resolved smoothing radius
  double alpha_cap = 0.0;     // closed-form cap (strongly convex regime)
  double Delta0 = 0.0;
  double R = 0.0;
  double B_alpha_T = 0.0;  // 2L(Delta0 + A_alpha_T), nonconvex regime
  MarkovBaseline baseline;
  bool trivial = false;  // R == 0 (convex) or Delta0 == 0 (nonconvex)
  std::vector<std::string> notes;
};

/// Strongly convex schedule: T from the explicit horizon formula, alpha solved
/// so the smoothing term of the finite-horizon bound equals epsilon/2, then
/// capped by sqrt(epsilon mu)/(dL); the smaller of the two is used.
ScheduleReport sc_schedule(int d, double L, double mu, double Delta0,
                           double epsilon, double delta);

/// Convex schedule: T = ceil(512 d L R^2 / eps + 24 log(2/delta)), alpha
/// solved so that A_alpha_T = epsilon/4. R_eps = 0 yields the trivial report.
ScheduleReport cvx_schedule(int d, double L, double R_eps, double epsilon,
                            double delta);

/// Nonconvex schedule: T = ceil(2L(32d + 16 log(2/delta)) Delta0 / eps),
/// alpha = 4 sqrt(Delta0 / (L U_T)) so that A_alpha_T = Delta0.
ScheduleReport nc_schedule(int d, double L, double Delta0, double epsilon,
                           double delta);

nlohmann::json schedule_report_json(const ScheduleReport& report);

/// One row of the method-comparison table (all entries order-level,
/// constants held at 1).
struct ComparisonRow {
  std::string regime;
  std::string method;  // "expectation", "markov", "ours"
  double queries = 0.0;
  double alpha = 0.0;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  double sc_alpha_ratio_markov_over_ours = 0.0;  // = sqrt(delta)
  double nc_alpha_ratio_ours_over_expectation = 0.0;  // = sqrt(d)
};

/// Builds the three-regime comparison for one parameter point.
ComparisonTable comparison_table(int d, double L, double mu, double R,
                                 double Delta0, double epsilon, double delta);

nlohmann::json comparison_table_json(const ComparisonTable& table);
std::string comparison_table_csv(const ComparisonTable& table);

}  // namespace zogd
