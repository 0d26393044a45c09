#include "zogd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "zogd/errors.hpp"
#include "zogd/optimizer.hpp"

namespace zogd {

namespace {

double require_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError("config: missing or non-numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

X0Spec parse_x0(const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "mode" && key != "value") {
      throw ConfigError("config: unknown x0 key '" + key + "'");
    }
  }
  if (!j.contains("mode") || !j["mode"].is_string()) {
    throw ConfigError("config: x0 needs a string 'mode'");
  }
  const std::string mode = j["mode"].get<std::string>();
  if (mode == "fill") return X0Spec::fill(require_number(j, "value"));
  if (mode == "gap") return X0Spec::gap(require_number(j, "value"));
  if (mode == "vector") {
    if (!j.contains("value") || !j["value"].is_array()) {
      throw ConfigError("config: vector x0 needs an array 'value'");
    }
    Eigen::VectorXd v(j["value"].size());
    Eigen::Index i = 0;
    for (const auto& entry : j["value"]) {
      if (!entry.is_number()) {
        throw ConfigError("config: x0 vector entries must be numeric");
      }
      v[i++] = entry.get<double>();
    }
    return X0Spec::vector(std::move(v));
  }
  throw ConfigError("config: unknown x0 mode '" + mode + "'");
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "problem",     "regime",      "epsilon",        "delta",
      "trials",      "master_seed", "overrides",      "parallelism",
      "radius",      "f_star_override", "output"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  ExperimentConfig config;

  if (!j.contains("problem") || !j["problem"].is_object()) {
    throw ConfigError("config: missing 'problem' object");
  }
  const auto& problem = j["problem"];
  if (!problem.contains("name") || !problem["name"].is_string()) {
    throw ConfigError("config: problem needs a string 'name'");
  }
  config.problem_name = problem["name"].get<std::string>();
  for (const auto& [key, value] : problem.items()) {
    if (key == "name") continue;
    if (key == "x0") {
      config.problem_params.x0 = parse_x0(value);
      continue;
    }
    if (!value.is_number()) {
      throw ConfigError("config: problem parameter '" + key +
                        "' must be numeric");
    }
    config.problem_params.scalars[key] = value.get<double>();
  }

  if (!j.contains("regime") || !j["regime"].is_string()) {
    throw ConfigError("config: missing string 'regime'");
  }
  config.regime = regime_from_string(j["regime"].get<std::string>());
  config.epsilon = require_number(j, "epsilon");
  config.delta = require_number(j, "delta");
  config.trials = static_cast<long>(require_number(j, "trials"));
  config.master_seed =
      static_cast<std::uint64_t>(require_number(j, "master_seed"));

  if (j.contains("overrides")) {
    const auto& o = j["overrides"];
    for (const auto& [key, value] : o.items()) {
      (void)value;
      if (key != "T" && key != "alpha") {
        throw ConfigError("config: unknown overrides key '" + key + "'");
      }
    }
    config.has_overrides = true;
    config.T_override = static_cast<long>(require_number(o, "T"));
    config.alpha_override = require_number(o, "alpha");
  }
  if (j.contains("parallelism")) {
    config.parallelism = static_cast<int>(require_number(j, "parallelism"));
  }
  if (j.contains("radius")) {
    config.has_radius = true;
    config.radius = require_number(j, "radius");
  }
  if (j.contains("f_star_override")) {
    config.has_f_star_override = true;
    config.f_star_override = require_number(j, "f_star_override");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    for (const auto& [key, value] : o.items()) {
      if (key == "json") {
        config.out_json = value.get<std::string>();
      } else if (key == "csv") {
        config.out_csv = value.get<std::string>();
      } else {
        throw ConfigError("config: unknown output key '" + key + "'");
      }
    }
  }

  if (config.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (config.parallelism < 1) {
    throw ConfigError("config: parallelism must be >= 1");
  }
  if (!(config.epsilon > 0.0)) {
    throw ConfigError("config: epsilon must be > 0");
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw ConfigError("config: delta must be in (0, 1)");
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw IoError("cannot open config: " + path);
  }
  nlohmann::json j;
  try {
    file >> j;
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError("config parse error in " + path + ": " + err.what());
  }
  return parse_config(j);
}

namespace {

// Order statistic at ceil(q * n) over an ascending sorted sample, 1-indexed.
double order_statistic(const std::vector<double>& sorted, double q) {
  const long n = static_cast<long>(sorted.size());
  long rank = static_cast<long>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp(rank, 1L, n);
  return sorted[static_cast<std::size_t>(rank - 1)];
}

struct TrialWork {
  TrialOutcome outcome;
  PathwiseAudit audit;
  long queries = 0;
};

}  // namespace

McSummary run_monte_carlo(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();

  ProblemSpec problem =
      make_problem(config.problem_name, config.problem_params);
  bool conditional = false;
  if (config.has_f_star_override) {
    problem.f_star = config.f_star_override;
    problem.f_star_known = true;
    conditional = true;
  }

  switch (config.regime) {
    case Regime::strongly_convex:
      if (problem.regime != Regime::strongly_convex) {
        throw ConfigError("strongly convex run needs a strongly convex problem");
      }
      break;
    case Regime::convex:
      if (problem.regime == Regime::nonconvex) {
        throw ConfigError("convex run incompatible with a nonconvex problem");
      }
      break;
    case Regime::nonconvex:
      break;
  }
  if (!problem.f_star_known) {
    throw ConfigError(
        "run needs a known f_star (suite value or f_star_override)");
  }
  const double Delta0 = problem.initial_gap();

  bool has_R = false;
  double R = 0.0;
  if (config.regime == Regime::convex) {
    if (config.has_radius) {
      if (config.radius < 0.0) throw ConfigError("config: radius must be >= 0");
      R = config.radius;
      conditional = true;
    } else if (problem.level_radius_available) {
      R = level_radius(problem, config.epsilon / 4.0);
    } else {
      throw ConfigError(
          "convex run needs an analytic level radius or a 'radius' entry");
    }
    has_R = true;
  }

  McSummary summary;
  summary.problem = problem.name;
  summary.regime = config.regime;
  summary.epsilon = config.epsilon;
  summary.delta = config.delta;
  summary.trials = config.trials;
  summary.master_seed = config.master_seed;
  summary.Delta0 = Delta0;
  summary.has_R = has_R;
  summary.R = R;
  summary.conditional = conditional;

  if (config.has_overrides) {
    if (config.T_override < 1 || !(config.alpha_override > 0.0)) {
      throw ConfigError("config: overrides need T >= 1 and alpha > 0");
    }
    summary.T = config.T_override;
    summary.alpha = config.alpha_override;
  } else {
    switch (config.regime) {
      case Regime::strongly_convex:
        summary.schedule =
            sc_schedule(problem.d, problem.smoothness_L,
                        problem.strong_convexity_mu, Delta0, config.epsilon,
                        config.delta);
        break;
      case Regime::convex:
        summary.schedule = cvx_schedule(problem.d, problem.smoothness_L, R,
                                        config.epsilon, config.delta);
        break;
      case Regime::nonconvex:
        summary.schedule = nc_schedule(problem.d, problem.smoothness_L, Delta0,
                                       config.epsilon, config.delta);
        break;
    }
    summary.scheduled = true;
    if (summary.schedule.trivial) {
      throw ConfigError(
          "schedule is trivial (no iterations needed); nothing to run");
    }
    summary.T = summary.schedule.T;
    summary.alpha = summary.schedule.alpha;
  }

  BoundInputs inputs;
  inputs.d = problem.d;
  inputs.L = problem.smoothness_L;
  // The confidence split inside the event checks follows the regime's
  // analysis: thirds for the strongly convex argument, halves otherwise.
  inputs.has_mu = config.regime == Regime::strongly_convex &&
                  problem.strong_convexity_mu > 0.0;
  inputs.mu = problem.strong_convexity_mu;
  inputs.alpha = summary.alpha;
  inputs.T = summary.T;
  inputs.delta = config.delta;
  inputs.Delta0 = Delta0;
  inputs.has_R = has_R;
  inputs.R = R;

  switch (config.regime) {
    case Regime::strongly_convex:
      summary.bound_value = sc_bound(inputs);
      break;
    case Regime::convex:
      summary.bound_value = cvx_bound(inputs, /*simple=*/true);
      break;
    case Regime::nonconvex:
      summary.bound_value = nc_bound(inputs);
      break;
  }

  std::vector<TrialWork> work(static_cast<std::size_t>(config.trials));
  std::atomic<long> next_trial{0};
  const auto run_trial = [&](long trial) {
    TrialWork& slot = work[static_cast<std::size_t>(trial)];
    slot.outcome.trial = trial;
    RunParams params;
    params.T = summary.T;
    params.alpha = summary.alpha;
    params.delta = config.delta;
    params.epsilon = config.epsilon;
    params.L_used = problem.smoothness_L;
    params.stream = SeedStream{config.master_seed,
                               static_cast<std::uint64_t>(trial), 0};
    const TrajectoryRecord record = run_trajectory(problem, params);
    slot.queries = record.queries.count;
    if (record.aborted) {
      slot.outcome.failed_run = true;
      return;
    }
    if (config.regime == Regime::nonconvex) {
      double sum = 0.0;
      for (const StepRecord& s : record.steps) sum += s.grad_norm_sq;
      slot.outcome.final_quantity = sum / static_cast<double>(record.steps.size());
    } else {
      slot.outcome.final_quantity = record.f_final - problem.f_star;
    }
    const EventReport events = check_events(record, inputs);
    slot.outcome.rho1 = events.holds_rho1;
    slot.outcome.rho2 = events.holds_rho2;
    slot.outcome.alpha = events.holds_alpha;
    slot.outcome.alpha_cvx = events.holds_alpha_cvx;
    slot.audit = audit_trajectory(record, params.L_used, params.alpha);
  };

  const int workers = static_cast<int>(
      std::min<long>(config.parallelism, config.trials));
  if (workers <= 1) {
    for (long trial = 0; trial < config.trials; ++trial) run_trial(trial);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const long trial = next_trial.fetch_add(1);
          if (trial >= config.trials) break;
          run_trial(trial);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  // Deterministic fold in trial order.
  summary.alpha_event_applicable = inputs.has_mu;
  std::vector<double> quantities;
  quantities.reserve(work.size());
  long rho1_fail = 0, rho2_fail = 0, alpha_fail = 0, alpha_cvx_fail = 0;
  for (const TrialWork& slot : work) {
    summary.outcomes.push_back(slot.outcome);
    summary.total_queries += slot.queries;
    if (slot.outcome.failed_run) {
      ++summary.failed_runs;
      continue;
    }
    ++summary.completed;
    quantities.push_back(slot.outcome.final_quantity);
    if (slot.outcome.final_quantity > config.epsilon) ++summary.failures;
    rho1_fail += slot.outcome.rho1 ? 0 : 1;
    rho2_fail += slot.outcome.rho2 ? 0 : 1;
    alpha_fail += slot.outcome.alpha ? 0 : 1;
    alpha_cvx_fail += slot.outcome.alpha_cvx ? 0 : 1;
    summary.audit.descent_violations += slot.audit.descent_violations;
    summary.audit.residual_violations += slot.audit.residual_violations;
    summary.audit.smoothing_violations += slot.audit.smoothing_violations;
    summary.audit.telescoping_violations += slot.audit.telescoping_violations;
  }

  if (static_cast<double>(summary.failed_runs) >
      0.01 * static_cast<double>(config.trials)) {
    throw std::runtime_error("harness: more than 1% of trials aborted");
  }

  const double n = static_cast<double>(summary.completed);
  std::sort(quantities.begin(), quantities.end());
  summary.q50 = order_statistic(quantities, 0.5);
  summary.q90 = order_statistic(quantities, 0.9);
  summary.q_conf = order_statistic(quantities, 1.0 - config.delta);
  summary.failure_rate = static_cast<double>(summary.failures) / n;
  summary.failure_ci_halfwidth =
      3.0 * std::sqrt(summary.failure_rate * (1.0 - summary.failure_rate) / n);
  summary.failure_threshold =
      config.delta + 3.0 * std::sqrt(config.delta * (1.0 - config.delta) / n);
  summary.event_fail_rho1 = static_cast<double>(rho1_fail) / n;
  summary.event_fail_rho2 = static_cast<double>(rho2_fail) / n;
  summary.event_fail_alpha = static_cast<double>(alpha_fail) / n;
  summary.event_fail_alpha_cvx = static_cast<double>(alpha_cvx_fail) / n;
  summary.dominates = summary.q_conf <= summary.bound_value;

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return summary;
}

nlohmann::json summary_json(const McSummary& s) {
  nlohmann::json outcomes = nlohmann::json::array();
  for (const TrialOutcome& o : s.outcomes) {
    outcomes.push_back({{"trial", o.trial},
                        {"final_quantity", o.final_quantity},
                        {"failed_run", o.failed_run},
                        {"rho1", o.rho1},
                        {"rho2", o.rho2},
                        {"alpha", o.alpha},
                        {"alpha_cvx", o.alpha_cvx}});
  }
  nlohmann::json j;
  j["problem"] = s.problem;
  j["regime"] = to_string(s.regime);
  j["epsilon"] = s.epsilon;
  j["delta"] = s.delta;
  j["trials"] = s.trials;
  j["master_seed"] = s.master_seed;
  j["T"] = s.T;
  j["alpha"] = s.alpha;
  j["scheduled"] = s.scheduled;
  if (s.scheduled) j["schedule"] = schedule_report_json(s.schedule);
  j["Delta0"] = s.Delta0;
  j["has_R"] = s.has_R;
  j["R"] = s.R;
  j["conditional"] = s.conditional;
  j["outcomes"] = outcomes;
  j["completed"] = s.completed;
  j["failed_runs"] = s.failed_runs;
  j["q50"] = s.q50;
  j["q90"] = s.q90;
  j["q_conf"] = s.q_conf;
  j["failures"] = s.failures;
  j["failure_rate"] = s.failure_rate;
  j["failure_ci_halfwidth"] = s.failure_ci_halfwidth;
  j["failure_threshold"] = s.failure_threshold;
  j["event_fail_rho1"] = s.event_fail_rho1;
  j["event_fail_rho2"] = s.event_fail_rho2;
  j["event_fail_alpha"] = s.event_fail_alpha;
  j["event_fail_alpha_cvx"] = s.event_fail_alpha_cvx;
  j["alpha_event_applicable"] = s.alpha_event_applicable;
  j["bound_value"] = s.bound_value;
  j["dominates"] = s.dominates;
  j["total_queries"] = s.total_queries;
  j["pathwise_descent_violations"] = s.audit.descent_violations;
  j["pathwise_residual_violations"] = s.audit.residual_violations;
  j["pathwise_smoothing_violations"] = s.audit.smoothing_violations;
  j["pathwise_telescoping_violations"] = s.audit.telescoping_violations;
  j["wall_seconds"] = s.wall_seconds;
  return j;
}

McSummary summary_from_json(const nlohmann::json& j) {
  McSummary s;
  s.problem = j.at("problem").get<std::string>();
  s.regime = regime_from_string(j.at("regime").get<std::string>());
  s.epsilon = j.at("epsilon").get<double>();
  s.delta = j.at("delta").get<double>();
  s.trials = j.at("trials").get<long>();
  s.master_seed = j.at("master_seed").get<std::uint64_t>();
  s.T = j.at("T").get<long>();
  s.alpha = j.at("alpha").get<double>();
  s.scheduled = j.at("scheduled").get<bool>();
  if (s.scheduled) {
    const auto& sj = j.at("schedule");
    s.schedule.regime = regime_from_string(sj.at("regime").get<std::string>());
    s.schedule.T = sj.at("T").get<long>();
    s.schedule.T_raw = sj.at("T_raw").get<double>();
    s.schedule.alpha = sj.at("alpha").get<double>();
    s.schedule.alpha_solved = sj.at("alpha_solved").get<double>();
    s.schedule.alpha_cap = sj.at("alpha_cap").get<double>();
    s.schedule.scale.tau_delta = sj.at("tau_delta").get<double>();
    s.schedule.scale.U_T = sj.at("U_T").get<double>();
    s.schedule.scale.A_alpha_T = sj.at("A_alpha_T").get<double>();
    s.schedule.Delta0 = sj.at("Delta0").get<double>();
    s.schedule.R = sj.at("R").get<double>();
    s.schedule.B_alpha_T = sj.at("B_alpha_T").get<double>();
    s.schedule.baseline.N = sj.at("baseline_N").get<double>();
    s.schedule.baseline.alpha = sj.at("baseline_alpha").get<double>();
    s.schedule.trivial = sj.at("trivial").get<bool>();
    s.schedule.notes = sj.at("notes").get<std::vector<std::string>>();
  }
  s.Delta0 = j.at("Delta0").get<double>();
  s.has_R = j.at("has_R").get<bool>();
  s.R = j.at("R").get<double>();
  s.conditional = j.at("conditional").get<bool>();
  for (const auto& oj : j.at("outcomes")) {
    TrialOutcome o;
    o.trial = oj.at("trial").get<long>();
    o.final_quantity = oj.at("final_quantity").get<double>();
    o.failed_run = oj.at("failed_run").get<bool>();
    o.rho1 = oj.at("rho1").get<bool>();
    o.rho2 = oj.at("rho2").get<bool>();
    o.alpha = oj.at("alpha").get<bool>();
    o.alpha_cvx = oj.at("alpha_cvx").get<bool>();
    s.outcomes.push_back(o);
  }
  s.completed = j.at("completed").get<long>();
  s.failed_runs = j.at("failed_runs").get<long>();
  s.q50 = j.at("q50").get<double>();
  s.q90 = j.at("q90").get<double>();
  s.q_conf = j.at("q_conf").get<double>();
  s.failures = j.at("failures").get<long>();
  s.failure_rate = j.at("failure_rate").get<double>();
  s.failure_ci_halfwidth = j.at("failure_ci_halfwidth").get<double>();
  s.failure_threshold = j.at("failure_threshold").get<double>();
  s.event_fail_rho1 = j.at("event_fail_rho1").get<double>();
  s.event_fail_rho2 = j.at("event_fail_rho2").get<double>();
  s.event_fail_alpha = j.at("event_fail_alpha").get<double>();
  s.event_fail_alpha_cvx = j.at("event_fail_alpha_cvx").get<double>();
  s.alpha_event_applicable = j.at("alpha_event_applicable").get<bool>();
  s.bound_value = j.at("bound_value").get<double>();
  s.dominates = j.at("dominates").get<bool>();
  s.total_queries = j.at("total_queries").get<long>();
  s.audit.descent_violations = j.at("pathwise_descent_violations").get<long>();
  s.audit.residual_violations =
      j.at("pathwise_residual_violations").get<long>();
  s.audit.smoothing_violations =
      j.at("pathwise_smoothing_violations").get<long>();
  s.audit.telescoping_violations =
      j.at("pathwise_telescoping_violations").get<long>();
  s.wall_seconds = j.at("wall_seconds").get<double>();
  return s;
}

bool summaries_equal(const McSummary& a, const McSummary& b) {
  nlohmann::json ja = summary_json(a);
  nlohmann::json jb = summary_json(b);
  ja.erase("wall_seconds");
  jb.erase("wall_seconds");
  return ja == jb;
}

std::string summary_csv(const McSummary& summary) {
  std::string out =
      "trial_index,final_quantity,failed_run,rho1,rho2,alpha,alpha_cvx\n";
  char line[160];
  for (const TrialOutcome& o : summary.outcomes) {
    std::snprintf(line, sizeof(line), "%ld,%.17g,%d,%d,%d,%d,%d\n", o.trial,
                  o.final_quantity, o.failed_run ? 1 : 0, o.rho1 ? 1 : 0,
                  o.rho2 ? 1 : 0, o.alpha ? 1 : 0, o.alpha_cvx ? 1 : 0);
    out += line;
  }
  return out;
}

void emit_report(const McSummary& summary, const std::string& path,
                 ReportFormat format) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw IoError("cannot open for writing: " + path);
  }
  if (format == ReportFormat::json) {
    file << summary_json(summary).dump(2) << '\n';
  } else {
    file << summary_csv(summary);
  }
  if (!file) {
    throw IoError("write failed: " + path);
  }
}

bool acceptance_holds(const McSummary& summary) {
  return summary.dominates &&
         summary.failure_rate <= summary.failure_threshold;
}

}  // namespace zogd
