#include "zogd/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zogd/errors.hpp"
#include "zogd/theory.hpp"

namespace zogd {

AccumulationScale accumulation_scale(int d, long T, double delta, double L,
                                     double alpha) {
  if (d < 1 || T < 1) {
    throw InvalidInputError("accumulation_scale: need d >= 1 and T >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("accumulation_scale: delta must be in (0, 1)");
  }
  if (!(L > 0.0) || !(alpha > 0.0)) {
    throw InvalidInputError("accumulation_scale: L and alpha must be > 0");
  }
  AccumulationScale scale;
  scale.tau_delta = std::log(2.0 / delta);
  const double dT = static_cast<double>(d) * static_cast<double>(T);
  scale.U_T = dT + 2.0 * std::sqrt(dT * scale.tau_delta) + 2.0 * scale.tau_delta;
  scale.A_alpha_T = L * alpha * alpha * scale.U_T / 16.0;
  return scale;
}

MarkovBaseline markov_baseline(Regime regime, int d, double L, double mu,
                               double R_or_Delta0, double epsilon,
                               double delta) {
  if (d < 1 || !(L > 0.0) || !(epsilon > 0.0) ||
      !(delta > 0.0 && delta <= 1.0)) {
    throw InvalidInputError("markov_baseline: invalid parameters");
  }
  const double dd = static_cast<double>(d);
  MarkovBaseline out;
  switch (regime) {
    case Regime::strongly_convex:
      if (!(mu > 0.0)) {
        throw InvalidInputError("markov_baseline: mu must be > 0 for sc");
      }
      out.N = (dd * L / mu) * std::log(1.0 / (delta * epsilon));
      out.alpha = std::sqrt(delta * epsilon * mu) / (dd * L);
      break;
    case Regime::convex:
      if (R_or_Delta0 < 0.0) {
        throw InvalidInputError("markov_baseline: radius must be >= 0");
      }
      out.N = dd * L * R_or_Delta0 * R_or_Delta0 / (delta * epsilon);
      out.alpha = std::sqrt(delta * epsilon / L) / dd;
      break;
    case Regime::nonconvex:
      if (R_or_Delta0 < 0.0) {
        throw InvalidInputError("markov_baseline: Delta0 must be >= 0");
      }
      out.N = dd * L * R_or_Delta0 / (delta * epsilon);
      out.alpha = std::sqrt(delta * epsilon) / (std::pow(dd, 1.5) * L);
      break;
  }
  return out;
}

namespace {

void check_schedule_args(int d, double L, double epsilon, double delta) {
  if (d < 1) throw InvalidInputError("schedule: d must be >= 1");
  if (!(L > 0.0)) throw InvalidInputError("schedule: L must be > 0");
  if (!(epsilon > 0.0)) throw InvalidInputError("schedule: epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("schedule: delta must be in (0, 1)");
  }
}

long ceil_to_horizon(double T_raw) {
  return std::max(1L, static_cast<long>(std::ceil(T_raw)));
}

}  // namespace

ScheduleReport sc_schedule(int d, double L, double mu, double Delta0,
                           double epsilon, double delta) {
  check_schedule_args(d, L, epsilon, delta);
  if (!(mu > 0.0 && mu <= L)) {
    throw InvalidInputError("sc_schedule: need 0 < mu <= L");
  }
  if (!(Delta0 > 0.0)) {
    throw InvalidInputError("sc_schedule: Delta0 must be > 0");
  }
  const double dd = static_cast<double>(d);

  ScheduleReport report;
  report.regime = Regime::strongly_convex;
  report.Delta0 = Delta0;
  report.T_raw = (16.0 * dd * L / mu) * std::log(2.0 * Delta0 / epsilon) +
                 12.0 * std::log(3.0 / delta);
  report.T = ceil_to_horizon(report.T_raw);

  // Smoothing radius making the second bound term exactly epsilon/2,
  // evaluated at the integer horizon so the loglog growth is accounted for.
  const double coeff = sc_smoothing_coefficient(d, L, mu, report.T, delta);
  report.alpha_solved = std::sqrt(8.0 * epsilon / (dd * L * coeff));
  report.alpha_cap = std::sqrt(epsilon * mu) / (dd * L);
  report.alpha = std::min(report.alpha_solved, report.alpha_cap);
  report.notes.push_back(
      report.alpha_solved <= report.alpha_cap
          ? "alpha resolved numerically: smoothing term = eps/2"
          : "alpha capped at sqrt(eps*mu)/(dL)");

  report.scale = accumulation_scale(d, report.T, delta, L, report.alpha);
  report.baseline = markov_baseline(Regime::strongly_convex, d, L, mu, Delta0,
                                    epsilon, delta);
  return report;
}

ScheduleReport cvx_schedule(int d, double L, double R_eps, double epsilon,
                            double delta) {
  check_schedule_args(d, L, epsilon, delta);
  if (R_eps < 0.0) {
    throw InvalidInputError("cvx_schedule: R_eps must be >= 0");
  }
  ScheduleReport report;
  report.regime = Regime::convex;
  report.R = R_eps;
  report.baseline =
      markov_baseline(Regime::convex, d, L, 0.0, R_eps, epsilon, delta);
  if (R_eps == 0.0) {
    report.trivial = true;
    report.notes.push_back(
        "R_eps = 0: level set inside the solution set, no queries needed");
    return report;
  }
  const double dd = static_cast<double>(d);
  report.T_raw = 512.0 * dd * L * R_eps * R_eps / epsilon +
                 24.0 * std::log(2.0 / delta);
  report.T = ceil_to_horizon(report.T_raw);

  const double tau = std::log(2.0 / delta);
  const double dT = dd * static_cast<double>(report.T);
  const double U_T = dT + 2.0 * std::sqrt(dT * tau) + 2.0 * tau;
  report.alpha_solved = 2.0 * std::sqrt(epsilon / (L * U_T));
  report.alpha = report.alpha_solved;
  report.notes.push_back("alpha resolved numerically: A_alpha_T = eps/4");

  report.scale = accumulation_scale(d, report.T, delta, L, report.alpha);
  return report;
}

ScheduleReport nc_schedule(int d, double L, double Delta0, double epsilon,
                           double delta) {
  check_schedule_args(d, L, epsilon, delta);
  if (Delta0 < 0.0) {
    throw InvalidInputError("nc_schedule: Delta0 must be >= 0");
  }
  ScheduleReport report;
  report.regime = Regime::nonconvex;
  report.Delta0 = Delta0;
  report.baseline =
      markov_baseline(Regime::nonconvex, d, L, 0.0, Delta0, epsilon, delta);
  if (Delta0 == 0.0) {
    report.trivial = true;
    report.notes.push_back("Delta0 = 0: starting point already stationary");
    return report;
  }
  const double dd = static_cast<double>(d);
  const double tau = std::log(2.0 / delta);
  report.T_raw = 2.0 * L * (32.0 * dd + 16.0 * tau) * Delta0 / epsilon;
  report.T = ceil_to_horizon(report.T_raw);

  const double dT = dd * static_cast<double>(report.T);
  const double U_T = dT + 2.0 * std::sqrt(dT * tau) + 2.0 * tau;
  report.alpha_solved = 4.0 * std::sqrt(Delta0 / (L * U_T));
  report.alpha = report.alpha_solved;
  report.notes.push_back("alpha resolved numerically: A_alpha_T = Delta0");

  report.scale = accumulation_scale(d, report.T, delta, L, report.alpha);
  report.B_alpha_T = 2.0 * L * (Delta0 + report.scale.A_alpha_T);
  return report;
}

nlohmann::json schedule_report_json(const ScheduleReport& report) {
  nlohmann::json j;
  j["regime"] = to_string(report.regime);
  j["T"] = report.T;
  j["T_raw"] = report.T_raw;
  j["alpha"] = report.alpha;
  j["alpha_solved"] = report.alpha_solved;
  j["alpha_cap"] = report.alpha_cap;
  j["tau_delta"] = report.scale.tau_delta;
  j["U_T"] = report.scale.U_T;
  j["A_alpha_T"] = report.scale.A_alpha_T;
  j["Delta0"] = report.Delta0;
  j["R"] = report.R;
  j["B_alpha_T"] = report.B_alpha_T;
  j["baseline_N"] = report.baseline.N;
  j["baseline_alpha"] = report.baseline.alpha;
  j["trivial"] = report.trivial;
  j["notes"] = report.notes;
  return j;
}

ComparisonTable comparison_table(int d, double L, double mu, double R,
                                 double Delta0, double epsilon, double delta) {
  if (d < 1 || !(L > 0.0) || !(mu > 0.0) || R < 0.0 || Delta0 < 0.0 ||
      !(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("comparison_table: invalid parameters");
  }
  const double dd = static_cast<double>(d);
  const double log_inv_eps = std::log(1.0 / epsilon);
  const double log_inv_delta = std::log(1.0 / delta);

  ComparisonTable table;
  // strongly convex
  const double sc_alpha_exp = std::sqrt(epsilon * mu) / (dd * L);
  const MarkovBaseline sc_markov = markov_baseline(
      Regime::strongly_convex, d, L, mu, Delta0, epsilon, delta);
  table.rows.push_back(
      {"strongly_convex", "expectation", (dd * L / mu) * log_inv_eps,
       sc_alpha_exp});
  table.rows.push_back(
      {"strongly_convex", "markov", sc_markov.N, sc_markov.alpha});
  table.rows.push_back({"strongly_convex", "ours",
                        (dd * L / mu) * log_inv_eps + log_inv_delta,
                        sc_alpha_exp});

  // convex
  const MarkovBaseline cvx_markov =
      markov_baseline(Regime::convex, d, L, mu, R, epsilon, delta);
  table.rows.push_back({"convex", "expectation", dd * L * R * R / epsilon,
                        std::sqrt(epsilon / L) / dd});
  table.rows.push_back({"convex", "markov", cvx_markov.N, cvx_markov.alpha});
  table.rows.push_back({"convex", "ours",
                        dd * L * R * R / epsilon + log_inv_delta,
                        R > 0.0 ? epsilon / (dd * L * R) : 0.0});

  // nonconvex
  const MarkovBaseline nc_markov =
      markov_baseline(Regime::nonconvex, d, L, mu, Delta0, epsilon, delta);
  const double nc_alpha_exp = std::sqrt(epsilon) / (std::pow(dd, 1.5) * L);
  const double nc_alpha_ours = std::sqrt(epsilon) / (L * dd);
  table.rows.push_back(
      {"nonconvex", "expectation", dd * L * Delta0 / epsilon, nc_alpha_exp});
  table.rows.push_back({"nonconvex", "markov", nc_markov.N, nc_markov.alpha});
  table.rows.push_back({"nonconvex", "ours",
                        L * Delta0 * (dd + log_inv_delta) / epsilon,
                        nc_alpha_ours});

  table.sc_alpha_ratio_markov_over_ours = sc_markov.alpha / sc_alpha_exp;
  table.nc_alpha_ratio_ours_over_expectation = nc_alpha_ours / nc_alpha_exp;
  return table;
}

nlohmann::json comparison_table_json(const ComparisonTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ComparisonRow& row : table.rows) {
    rows.push_back({{"regime", row.regime},
                    {"method", row.method},
                    {"queries", row.queries},
                    {"alpha", row.alpha}});
  }
  return {{"rows", rows},
          {"sc_alpha_ratio_markov_over_ours",
           table.sc_alpha_ratio_markov_over_ours},
          {"nc_alpha_ratio_ours_over_expectation",
           table.nc_alpha_ratio_ours_over_expectation}};
}

std::string comparison_table_csv(const ComparisonTable& table) {
  std::string out = "regime,method,queries,alpha\n";
  char line[160];
  for (const ComparisonRow& row : table.rows) {
    std::snprintf(line, sizeof(line), "%s,%s,%.17g,%.17g\n",
                  row.regime.c_str(), row.method.c_str(), row.queries,
                  row.alpha);
    out += line;
  }
  return out;
}

}  // namespace zogd
