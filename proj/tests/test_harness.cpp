#include "zogd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <doctest.h>
#include <fstream>
#include <vector>

#include "zogd/errors.hpp"

using namespace zogd;

namespace {

nlohmann::json base_config_json() {
  return nlohmann::json{
      {"problem", {{"name", "quad1d"}, {"x0", {{"mode", "fill"}, {"value", 1.0}}}}},
      {"regime", "sc"},
      {"epsilon", 1e-3},
      {"delta", 0.1},
      {"trials", 1},
      {"master_seed", 5150},
      {"overrides", {{"T", 2}, {"alpha", 1e-3}}}};
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file);
  return std::string(std::istreambuf_iterator<char>(file),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config parsing rejects unknown keys") {
  nlohmann::json j = base_config_json();
  j["typo_key"] = 1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config_json();
  j["problem"]["x0"]["typo"] = 1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config_json();
  j["overrides"]["gamma"] = 1;
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config_json();
  j.erase("regime");
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  j = base_config_json();
  j["delta"] = 1.5;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("deterministic single-trial run matches the closed form") {
  const ExperimentConfig config = parse_config(base_config_json());
  const McSummary summary = run_monte_carlo(config);
  CHECK(summary.completed == 1);
  CHECK(summary.outcomes.size() == 1);
  CHECK(summary.outcomes[0].final_quantity ==
        doctest::Approx(0.5 * 0.5625 * 0.5625).epsilon(1e-9));
  CHECK(summary.total_queries == 4);
  CHECK(summary.q50 == summary.outcomes[0].final_quantity);
}

TEST_CASE("parallelism does not change any aggregated number") {
  nlohmann::json j = base_config_json();
  j["problem"] = {{"name", "sphere"},
                  {"d", 4},
                  {"mu", 0.5},
                  {"x0", {{"mode", "fill"}, {"value", 1.0}}}};
  j["trials"] = 24;
  j["overrides"] = {{"T", 60}, {"alpha", 1e-3}};

  ExperimentConfig serial = parse_config(j);
  serial.parallelism = 1;
  ExperimentConfig threaded = parse_config(j);
  threaded.parallelism = 3;

  const McSummary a = run_monte_carlo(serial);
  const McSummary b = run_monte_carlo(threaded);
  CHECK(summaries_equal(a, b));
  CHECK(a.total_queries == 24 * 2 * 60);

  // Same config twice is identical as well.
  const McSummary c = run_monte_carlo(serial);
  CHECK(summaries_equal(a, c));
}

TEST_CASE("quantiles use the conservative order statistic") {
  nlohmann::json j = base_config_json();
  j["problem"] = {{"name", "sphere"},
                  {"d", 3},
                  {"mu", 0.5},
                  {"x0", {{"mode", "fill"}, {"value", 1.0}}}};
  j["trials"] = 5;
  j["delta"] = 0.25;
  j["overrides"] = {{"T", 20}, {"alpha", 1e-3}};
  const McSummary summary = run_monte_carlo(parse_config(j));

  std::vector<double> sorted;
  for (const TrialOutcome& o : summary.outcomes) {
    sorted.push_back(o.final_quantity);
  }
  std::sort(sorted.begin(), sorted.end());
  CHECK(summary.q50 == sorted[static_cast<std::size_t>(
                           std::ceil(0.5 * 5.0)) - 1]);
  CHECK(summary.q_conf == sorted[static_cast<std::size_t>(
                              std::ceil(0.75 * 5.0)) - 1]);
}

TEST_CASE("scheduled strongly convex experiment dominates its bound") {
  nlohmann::json j = base_config_json();
  j["problem"] = {{"name", "aniso_quad"},
                  {"d", 4},
                  {"mu", 0.25},
                  {"L", 1.0},
                  {"x0", {{"mode", "gap"}, {"value", 1.0}}}};
  j["epsilon"] = 0.05;
  j["trials"] = 60;
  j.erase("overrides");
  ExperimentConfig config = parse_config(j);
  config.parallelism = 2;
  const McSummary summary = run_monte_carlo(config);
  CHECK(summary.scheduled);
  CHECK(summary.schedule.T == summary.T);
  CHECK(summary.dominates);
  CHECK(summary.failure_rate <= summary.failure_threshold);
  CHECK(summary.audit.total() == 0);
  CHECK(acceptance_holds(summary));
  CHECK(summary.total_queries == 60 * 2 * summary.T);
}

TEST_CASE("convex run needs a radius; user-supplied radius marks conditional") {
  nlohmann::json j = base_config_json();
  j["problem"] = {{"name", "log_sum_exp"},
                  {"d", 3},
                  {"terms", 9},
                  {"x0", {{"mode", "fill"}, {"value", 0.2}}}};
  j["regime"] = "cvx";
  j["epsilon"] = 0.5;
  j["trials"] = 2;
  j["overrides"] = {{"T", 50}, {"alpha", 1e-3}};
  CHECK_THROWS_AS(run_monte_carlo(parse_config(j)), ConfigError);

  j["radius"] = 2.0;
  j["f_star_override"] = -1.0;  // conservative lower bound for the gap
  const McSummary summary = run_monte_carlo(parse_config(j));
  CHECK(summary.conditional);
  CHECK(summary.has_R);
  CHECK(summary.R == 2.0);
}

TEST_CASE("regime compatibility is enforced") {
  nlohmann::json j = base_config_json();
  j["problem"] = {{"name", "cosine_mix"},
                  {"d", 3},
                  {"x0", {{"mode", "fill"}, {"value", 1.0}}}};
  j["regime"] = "sc";
  CHECK_THROWS_AS(run_monte_carlo(parse_config(j)), ConfigError);
  j["regime"] = "cvx";
  CHECK_THROWS_AS(run_monte_carlo(parse_config(j)), ConfigError);
}

TEST_CASE("summary JSON round-trips and re-emits byte-identically") {
  nlohmann::json j = base_config_json();
  j["trials"] = 3;
  const McSummary summary = run_monte_carlo(parse_config(j));

  const nlohmann::json dumped = summary_json(summary);
  const McSummary parsed = summary_from_json(dumped);
  CHECK(summaries_equal(summary, parsed));
  CHECK(summary_json(parsed)["wall_seconds"] == dumped["wall_seconds"]);

  const std::string json_path = "harness_report_test.json";
  const std::string csv_path = "harness_report_test.csv";
  emit_report(summary, json_path, ReportFormat::json);
  const std::string first = read_file(json_path);
  emit_report(summary, json_path, ReportFormat::json);
  CHECK(read_file(json_path) == first);

  emit_report(summary, csv_path, ReportFormat::csv);
  const std::string csv_first = read_file(csv_path);
  emit_report(summary, csv_path, ReportFormat::csv);
  CHECK(read_file(csv_path) == csv_first);
  CHECK(csv_first.rfind(
            "trial_index,final_quantity,failed_run,rho1,rho2,alpha,alpha_cvx",
            0) == 0);
  std::remove(json_path.c_str());
  std::remove(csv_path.c_str());
}

TEST_CASE("empty summary still emits a header-only CSV") {
  McSummary empty;
  const std::string path = "harness_empty_test.csv";
  emit_report(empty, path, ReportFormat::csv);
  CHECK(read_file(path) ==
        "trial_index,final_quantity,failed_run,rho1,rho2,alpha,alpha_cvx\n");
  std::remove(path.c_str());
}

TEST_CASE("emit surfaces IO failures with the path") {
  McSummary empty;
  CHECK_THROWS_AS(
      emit_report(empty, "/nonexistent_dir_zzz/report.json",
                  ReportFormat::json),
      IoError);
}

TEST_CASE("assert predicate reacts to domination and failure rate") {
  nlohmann::json j = base_config_json();
  const McSummary summary = run_monte_carlo(parse_config(j));
  McSummary doctored = summary;
  doctored.dominates = false;
  CHECK_FALSE(acceptance_holds(doctored));
  doctored = summary;
  doctored.failure_rate = doctored.failure_threshold + 0.01;
  CHECK_FALSE(acceptance_holds(doctored));
}

TEST_CASE("oversized smoothing radius is a usable diagnostic path") {
  // 100x the scheduled alpha: the run must complete and report whatever
  // domination outcome it finds; the flag is diagnostic, not an error.
  nlohmann::json j = base_config_json();
  j["problem"] = {{"name", "sphere"},
                  {"d", 3},
                  {"mu", 0.5},
                  {"x0", {{"mode", "fill"}, {"value", 1.0}}}};
  j["trials"] = 10;
  j["epsilon"] = 0.05;
  j.erase("overrides");
  const McSummary scheduled = run_monte_carlo(parse_config(j));
  j["overrides"] = {{"T", scheduled.T},
                    {"alpha", 100.0 * scheduled.alpha}};
  const McSummary inflated = run_monte_carlo(parse_config(j));
  CHECK(inflated.completed == 10);
  CHECK(inflated.bound_value > scheduled.bound_value);
}

TEST_SUITE_END();
