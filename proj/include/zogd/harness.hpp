#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "zogd/oracles.hpp"
#include "zogd/schedules.hpp"
#include "zogd/theory.hpp"

namespace zogd {

/// Parsed experiment description. See README for the config file schema;
/// unknown keys anywhere in the file are errors.
struct ExperimentConfig {
  std::string problem_name;
  ProblemParams problem_params;
  Regime regime = Regime::strongly_convex;
  double epsilon = 0.0;
  double delta = 0.0;
  long trials = 1;
  std::uint64_t master_seed = 0;
  bool has_overrides = false;
  long T_override = 0;
  double alpha_override = 0.0;
  int parallelism = 1;
  bool has_radius = false;
  double radius = 0.0;  // user-supplied level radius (marks the run conditional)
  bool has_f_star_override = false;
  double f_star_override = 0.0;
  std::string out_json;
  std::string out_csv;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

struct TrialOutcome {
  long trial = 0;
  double final_quantity = 0.0;  // optimality gap, or average squared gradient
  bool failed_run = false;
  bool rho1 = true;
  bool rho2 = true;
  bool alpha = true;
  bool alpha_cvx = true;
};

/// Aggregated statistics over the independent trials of one experiment.
struct McSummary {
  std::string problem;
  Regime regime = Regime::strongly_convex;
  double epsilon = 0.0;
  double delta = 0.0;
  long trials = 0;
  std::uint64_t master_seed = 0;
  long T = 0;
  double alpha = 0.0;
  bool scheduled = false;  // (T, alpha) produced by the schedules module
  ScheduleReport schedule;
  double Delta0 = 0.0;
  bool has_R = false;
  double R = 0.0;
  bool conditional = false;  // user-supplied radius or f_star

  std::vector<TrialOutcome> outcomes;  // sorted by trial index
  long completed = 0;
  long failed_runs = 0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q_conf = 0.0;  // order statistic at ceil((1-delta) n)
  long failures = 0;    // trials with final_quantity > epsilon
  double failure_rate = 0.0;
  double failure_ci_halfwidth = 0.0;  // 3 binomial standard errors
  double failure_threshold = 0.0;     // delta + 3 sqrt(delta(1-delta)/n)
  double event_fail_rho1 = 0.0;
  double event_fail_rho2 = 0.0;
  double event_fail_alpha = 0.0;
  double event_fail_alpha_cvx = 0.0;
  bool alpha_event_applicable = false;
  double bound_value = 0.0;  // regime's finite-horizon bound at (T, alpha)
  bool dominates = false;    // q_conf <= bound_value
  long total_queries = 0;
  PathwiseAudit audit;
  double wall_seconds = 0.0;
};

/// Runs `trials` independent trajectories with streams (master_seed, i) and
/// aggregates deterministically by trial index; worker count never affects
/// any reported number. Throws if more than 1% of trials abort.
McSummary run_monte_carlo(const ExperimentConfig& config);

nlohmann::json summary_json(const McSummary& summary);
McSummary summary_from_json(const nlohmann::json& j);

/// Field-wise equality ignoring wall time.
bool summaries_equal(const McSummary& a, const McSummary& b);

/// One row per trial: trial_index,final_quantity,failed_run,rho1,rho2,alpha,alpha_cvx.
std::string summary_csv(const McSummary& summary);

enum class ReportFormat { json, csv };

/// Writes the summary to `path`. Re-emission of the same summary is
/// byte-identical.
void emit_report(const McSummary& summary, const std::string& path,
                 ReportFormat format);

/// The `montecarlo --assert` predicate: domination holds and the empirical
/// failure rate stays within its binomial allowance.
bool acceptance_holds(const McSummary& summary);

}  // namespace zogd
