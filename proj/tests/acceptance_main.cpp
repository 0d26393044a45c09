// Acceptance suite: statistical instantiations of the three finite-horizon
// guarantees plus the distributional, concentration, formula, and comparison
// batteries. Prints one PASS/FAIL line per criterion and exits nonzero on
// any failure.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zogd/checks.hpp"
#include "zogd/harness.hpp"

namespace {

int failures = 0;

void report(int criterion, const std::string& label, bool pass,
            const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              label.c_str(), detail.c_str());
  if (!pass) ++failures;
}

void report_battery(int criterion, const std::string& label,
                    const std::vector<zogd::CheckResult>& results) {
  bool pass = true;
  std::string detail;
  for (const zogd::CheckResult& r : results) {
    if (!r.pass) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += r.name + ": " + r.detail;
    }
  }
  if (pass) {
    detail = std::to_string(results.size()) + " checks";
  }
  report(criterion, label, pass, detail);
}

std::string mc_detail(const zogd::McSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "T=%ld alpha=%.3g q_conf=%.4g bound=%.4g failure_rate=%.4g "
                "threshold=%.4g wall=%.1fs",
                s.T, s.alpha, s.q_conf, s.bound_value, s.failure_rate,
                s.failure_threshold, s.wall_seconds);
  return buf;
}

zogd::ExperimentConfig make_config(const nlohmann::json& j) {
  zogd::ExperimentConfig config = zogd::parse_config(j);
  config.parallelism = 2;
  return config;
}

}  // namespace

int main() {
  long pathwise_violations = 0;

  // Criterion 1: strongly convex instantiation on the anisotropic quadratic.
  {
    const nlohmann::json j = {
        {"problem",
         {{"name", "aniso_quad"},
          {"d", 10},
          {"mu", 0.1},
          {"L", 1.0},
          {"x0", {{"mode", "gap"}, {"value", 1.0}}}}},
        {"regime", "sc"},
        {"epsilon", 1e-3},
        {"delta", 0.1},
        {"trials", 500},
        {"master_seed", 20260808}};
    const zogd::McSummary s = zogd::run_monte_carlo(make_config(j));
    const double allowance =
        0.1 + 3.0 * std::sqrt(0.1 * 0.9 / 500.0);
    const bool pass = s.T == 12203 && s.scheduled &&
                      s.failure_rate <= allowance && s.failed_runs == 0;
    report(1, "strongly convex failure frequency", pass, mc_detail(s));
    pathwise_violations += s.audit.total();
  }

  // Criterion 2: convex instantiation on the singular quadratic.
  {
    const nlohmann::json j = {
        {"problem",
         {{"name", "singular_quad"},
          {"d", 10},
          {"zeros", 1},
          {"lpos", 1.0},
          {"L", 1.0},
          {"x0", {{"mode", "gap"}, {"value", 0.5}}}}},
        {"regime", "cvx"},
        {"epsilon", 0.5},
        {"delta", 0.1},
        {"trials", 500},
        {"master_seed", 20260809}};
    const zogd::McSummary s = zogd::run_monte_carlo(make_config(j));
    const bool pass = s.dominates &&
                      s.failure_rate <= s.failure_threshold &&
                      s.failed_runs == 0;
    report(2, "convex quantile domination and failure frequency", pass,
           mc_detail(s));
    pathwise_violations += s.audit.total();
  }

  // Criterion 3: nonconvex instantiation on the cosine-regularized member.
  {
    const nlohmann::json j = {
        {"problem",
         {{"name", "cosine_mix"},
          {"d", 10},
          {"x0", {{"mode", "fill"}, {"value", 1.0}}}}},
        {"regime", "nc"},
        {"epsilon", 0.5},
        {"delta", 0.1},
        {"trials", 500},
        {"master_seed", 20260810}};
    const zogd::McSummary s = zogd::run_monte_carlo(make_config(j));
    const bool pass = s.dominates && s.failed_runs == 0;
    report(3, "nonconvex average-stationarity domination", pass,
           mc_detail(s));
    pathwise_violations += s.audit.total();
  }

  // Criterion 4: pathwise inequalities across every acceptance iteration.
  {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%ld violations", pathwise_violations);
    report(4, "pathwise descent/residual/smoothing/telescoping",
           pathwise_violations == 0, buf);
  }

  // Criterion 5: distributional suite at full scale.
  report_battery(5, "projection law, mean, and moments",
                 zogd::distribution_checks(731, 100000));

  // Criterion 6: concentration suite.
  report_battery(6, "chi-square caps, events, maximal Bernstein",
                 zogd::concentration_checks(947, 100000));

  // Criterion 7: deterministic formula suite.
  report_battery(7, "recursion cap, weight caps, schedule consistency",
                 zogd::formula_checks(1123));

  // Criterion 8: comparison artifact.
  report_battery(8, "comparison table ratio columns",
                 zogd::comparison_checks());

  std::printf("%s: %d criterion failure(s)\n",
              failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              failures);
  return failures == 0 ? 0 : 1;
}
