#include "zogd/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "zogd/optimizer.hpp"
#include "zogd/oracles.hpp"
#include "zogd/sampling.hpp"
#include "zogd/schedules.hpp"
#include "zogd/stats.hpp"
#include "zogd/theory.hpp"

namespace zogd {

namespace {

std::string format_detail(const char* fmt, double observed, double limit) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, observed, limit);
  return buf;
}

CheckResult make_result(std::string name, bool pass, double observed,
                        double limit) {
  return {std::move(name), pass,
          format_detail("observed %.6g vs limit %.6g", observed, limit)};
}

// Uniform double in (0, 1) from the stream; consumes one block.
double next_uniform(SeedStream& stream) {
  const auto words =
      philox4x32(stream.master_seed, stream.stream_index, stream.block);
  ++stream.block;
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::vector<CheckResult> distribution_checks(std::uint64_t seed,
                                             long samples) {
  std::vector<CheckResult> results;
  const double n = static_cast<double>(samples);
  const double ks_limit = 1.63 / std::sqrt(n);

  for (const int d : {2, 3, 10, 100}) {
    SeedStream stream{seed, static_cast<std::uint64_t>(d), 0};
    const Eigen::VectorXd axis = Eigen::VectorXd::Unit(d, 0);
    std::vector<double> zetas(static_cast<std::size_t>(samples));
    double mean = 0.0;
    for (long i = 0; i < samples; ++i) {
      const Direction u = sample_direction(stream, d);
      const double z = squared_normalized_projection(u, axis);
      zetas[static_cast<std::size_t>(i)] = z;
      mean += z;
    }
    mean /= n;

    const double a = 0.5;
    const double b = 0.5 * (d - 1);
    const double ks =
        ks_statistic(zetas, [&](double x) { return beta_cdf(x, a, b); });
    char name[64];
    std::snprintf(name, sizeof(name), "zeta KS vs Beta, d=%d", d);
    results.push_back(make_result(name, ks < ks_limit, ks, ks_limit));

    const double variance = 2.0 * (d - 1.0) / (d * d * (d + 2.0));
    const double mean_tol = 3.0 * std::sqrt(variance / n);
    std::snprintf(name, sizeof(name), "zeta mean vs 1/d, d=%d", d);
    results.push_back(make_result(name, std::fabs(mean - 1.0 / d) <= mean_tol,
                                  std::fabs(mean - 1.0 / d), mean_tol));

    if (d == 10) {
      for (const int m : {1, 2, 3}) {
        double emp = 0.0;
        for (const double z : zetas) emp += std::pow(z, m);
        emp /= n;
        const double expected = beta_raw_moment(a, b, m);
        const double second = beta_raw_moment(a, b, 2 * m);
        const double se = std::sqrt((second - expected * expected) / n);
        std::snprintf(name, sizeof(name), "beta raw moment m=%d, d=10", m);
        results.push_back(make_result(name, std::fabs(emp - expected) <= 3.0 * se,
                                      std::fabs(emp - expected), 3.0 * se));
      }
    }
  }
  return results;
}

namespace {

CheckResult chi_square_cap_check(std::uint64_t seed, long samples, double tau,
                                 const char* label) {
  const int k = 100;
  const ChiSquareCaps caps = chi_square_caps(k, tau);
  SeedStream stream{seed, 11, 0};
  long upper_hits = 0, lower_hits = 0;
  for (long i = 0; i < samples; ++i) {
    const Direction u = sample_direction(stream, k);
    if (u.norm_sq >= caps.upper) ++upper_hits;
    if (u.norm_sq <= caps.lower) ++lower_hits;
  }
  const double n = static_cast<double>(samples);
  const double p = std::exp(-tau);
  const double limit = p + 3.0 * std::sqrt(p * (1.0 - p) / n);
  const double freq =
      std::max(upper_hits, lower_hits) / n;  // both tails share the budget
  return make_result(std::string("chi-square cap exceedance, ") + label,
                     freq <= limit, freq, limit);
}

CheckResult bernstein_check(std::uint64_t seed, double x, long trials) {
  const long N = 100;
  long hits = 0;
  for (long trial = 0; trial < trials; ++trial) {
    SeedStream stream{seed, static_cast<std::uint64_t>(trial), 0};
    double walk = 0.0;
    bool exceeded = false;
    for (long i = 0; i < N; i += 2) {
      double z0, z1;
      next_normal_pair(stream, z0, z1);
      walk += z0 >= 0.0 ? 1.0 : -1.0;
      if (walk >= x) exceeded = true;
      walk += z1 >= 0.0 ? 1.0 : -1.0;
      if (walk >= x) exceeded = true;
    }
    if (exceeded) ++hits;
  }
  const double tail = maximal_bernstein_tail(N, 1.0, 1.0, x);
  const double n = static_cast<double>(trials);
  const double limit = tail + 3.0 * std::sqrt(tail * (1.0 - tail) / n);
  const double freq = static_cast<double>(hits) / n;
  char name[64];
  std::snprintf(name, sizeof(name), "maximal Bernstein tail, x=%g", x);
  return make_result(name, freq <= limit, freq, limit);
}

void event_frequency_checks(std::uint64_t seed, int d, long trials,
                            std::vector<CheckResult>& results) {
  const double delta = 0.1;
  ProblemSpec problem = make_sphere(d, 0.5, X0Spec::fill(1.0));
  RunParams params;
  params.T = 400;
  params.alpha = 1e-3;
  params.delta = delta;
  params.epsilon = 1e-3;
  params.L_used = problem.smoothness_L;

  BoundInputs inputs;
  inputs.d = d;
  inputs.L = problem.smoothness_L;
  inputs.has_mu = true;
  inputs.mu = problem.strong_convexity_mu;
  inputs.alpha = params.alpha;
  inputs.T = params.T;
  inputs.delta = delta;
  inputs.Delta0 = problem.initial_gap();

  long fail_rho1 = 0, fail_rho2 = 0, fail_alpha = 0, fail_alpha_cvx = 0;
  double share_third = 0.0, share_half = 0.0;
  for (long trial = 0; trial < trials; ++trial) {
    params.stream = SeedStream{seed, static_cast<std::uint64_t>(trial), 0};
    const TrajectoryRecord record = run_trajectory(problem, params);
    const EventReport events = check_events(record, inputs);
    fail_rho1 += events.holds_rho1 ? 0 : 1;
    fail_rho2 += events.holds_rho2 ? 0 : 1;
    fail_alpha += events.holds_alpha ? 0 : 1;
    fail_alpha_cvx += events.holds_alpha_cvx ? 0 : 1;
    share_third = events.share_rho1;
    share_half = events.share_alpha_cvx;
  }
  const double n = static_cast<double>(trials);
  const auto limit_for = [n](double share) {
    return share + 3.0 * std::sqrt(share * (1.0 - share) / n);
  };
  const struct {
    const char* label;
    long fails;
    double share;
  } rows[] = {{"projection-sum event", fail_rho1, share_third},
              {"suffix-sum event", fail_rho2, share_third},
              {"weighted-norm event", fail_alpha, share_third},
              {"smoothing-sum event", fail_alpha_cvx, share_half}};
  for (const auto& row : rows) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s failure rate, d=%d", row.label, d);
    results.push_back(make_result(name, row.fails / n <= limit_for(row.share),
                                  row.fails / n, limit_for(row.share)));
  }
}

}  // namespace

std::vector<CheckResult> concentration_checks(std::uint64_t seed,
                                              long samples) {
  std::vector<CheckResult> results;
  results.push_back(chi_square_cap_check(seed, samples, 1.0, "tau=1"));
  results.push_back(
      chi_square_cap_check(seed + 1, samples, std::log(20.0), "tau=log 20"));
  for (const double x : {10.0, 20.0, 30.0}) {
    results.push_back(bernstein_check(seed + 2, x, 20000));
  }
  event_frequency_checks(seed + 3, 2, 1000, results);
  event_frequency_checks(seed + 4, 10, 1000, results);
  return results;
}

std::vector<CheckResult> formula_checks(std::uint64_t seed) {
  std::vector<CheckResult> results;
  SeedStream stream{seed, 0, 0};

  // Perturbed-recursion domination: iterate the recursion with equality at
  // every feasible step and compare the endpoint with the closed-form cap.
  {
    long violations = 0;
    double worst = 0.0;
    for (int instance = 0; instance < 10000; ++instance) {
      const int len = 1 + static_cast<int>(next_uniform(stream) * 20.0);
      const double h0 = 5.0 * next_uniform(stream);
      std::vector<double> a(static_cast<std::size_t>(len));
      std::vector<double> eps(static_cast<std::size_t>(len));
      double h = h0;
      for (int t = 0; t < len; ++t) {
        const double cap_a = h > 0.0 ? 1.0 / h : 1.0;
        a[static_cast<std::size_t>(t)] = cap_a * next_uniform(stream);
        eps[static_cast<std::size_t>(t)] = 0.2 * next_uniform(stream);
        h = h - a[static_cast<std::size_t>(t)] * h * h +
            eps[static_cast<std::size_t>(t)];
      }
      const double cap = perturbed_recursion_cap(h0, a, eps);
      worst = std::max(worst, h - cap);
      if (h > cap + 1e-12) ++violations;
    }
    results.push_back(make_result("perturbed recursion cap dominates",
                                  violations == 0,
                                  static_cast<double>(violations), 0.0));
    results.push_back(
        make_result("perturbed recursion worst slack", worst <= 1e-12, worst,
                    1e-12));
  }

  // Decay-weight sums against their closed-form caps.
  {
    long violations = 0;
    for (int instance = 0; instance < 50; ++instance) {
      const long T = 1 + static_cast<long>(next_uniform(stream) * 3000.0);
      const int d = 1 + static_cast<int>(next_uniform(stream) * 200.0);
      const double L = 0.5 + 4.0 * next_uniform(stream);
      const double mu = L * (0.01 + 0.99 * next_uniform(stream));
      const double delta2 = 0.001 + 0.99 * next_uniform(stream);
      const std::vector<double> rho = rho_weights(T, d, mu, L, delta2);
      double sum = 0.0, sum_sq = 0.0;
      for (const double r : rho) {
        sum += r;
        sum_sq += r * r;
      }
      const double log_terms = 500.0 * std::log(1.0 / delta2) +
                               500.0 * std::log(std::log(2.0 * T));
      const double cap_sum = 502.0 + log_terms + 16.0 * L * d / mu;
      const double cap_sum_sq = 502.0 + log_terms + 8.0 * L * d / mu;
      if (sum > cap_sum + 1e-9 || sum_sq > cap_sum_sq + 1e-9) ++violations;
    }
    results.push_back(make_result("decay weight sums under closed-form caps",
                                  violations == 0,
                                  static_cast<double>(violations), 0.0));
  }

  // Schedule and bound evaluators agree by construction.
  {
    long violations = 0;
    double worst_excess = 0.0;
    const auto record_excess = [&](double bound, double epsilon) {
      const double excess = bound - epsilon * (1.0 + 1e-9);
      worst_excess = std::max(worst_excess, excess);
      if (excess > 0.0) ++violations;
    };
    const double sc_grid[7][6] = {
        // d, L, mu, Delta0, epsilon, delta
        {10, 1.0, 0.1, 1.0, 1e-3, 0.1},   {1, 1.0, 1.0, 2e-3, 1e-3, 0.1},
        {5, 2.0, 0.5, 4.0, 1e-2, 0.05},   {50, 1.0, 0.02, 0.5, 1e-4, 0.2},
        {3, 0.5, 0.5, 10.0, 0.3, 0.01},   {20, 4.0, 1.0, 2.0, 1e-2, 0.5},
        {2, 1.0, 0.9, 0.1, 1e-5, 0.001}};
    for (const auto& g : sc_grid) {
      const ScheduleReport s = sc_schedule(static_cast<int>(g[0]), g[1], g[2],
                                           g[3], g[4], g[5]);
      BoundInputs in{static_cast<int>(g[0]), g[1], true, g[2],
                     s.alpha,               s.T,  g[5], g[3]};
      record_excess(sc_bound(in), g[4]);
    }
    const double cvx_grid[7][5] = {
        // d, L, R, epsilon, delta
        {2, 1.0, 1.0, 0.5, 0.1},   {10, 1.0, 1.118, 0.5, 0.1},
        {5, 3.0, 0.2, 1e-2, 0.05}, {30, 0.5, 5.0, 0.1, 0.2},
        {1, 1.0, 1.0, 1e-3, 0.01}, {8, 2.0, 2.0, 0.05, 0.5},
        {4, 1.0, 0.01, 1e-4, 0.1}};
    for (const auto& g : cvx_grid) {
      const ScheduleReport s =
          cvx_schedule(static_cast<int>(g[0]), g[1], g[2], g[3], g[4]);
      BoundInputs in{static_cast<int>(g[0]), g[1], false, 0.0, s.alpha,
                     s.T,                   g[4], 0.0,    true, g[2]};
      record_excess(cvx_bound(in, true), g[3]);
    }
    const double nc_grid[6][5] = {
        // d, L, Delta0, epsilon, delta
        {2, 1.0, 1.0, 1.0, 0.7357588823428847},
        {10, 2.0, 20.0, 0.5, 0.1},
        {5, 1.0, 0.3, 1e-2, 0.05},
        {100, 0.5, 2.0, 0.1, 0.2},
        {1, 1.0, 1.0, 1e-3, 0.01},
        {25, 3.0, 5.0, 0.25, 0.5}};
    for (const auto& g : nc_grid) {
      const ScheduleReport s =
          nc_schedule(static_cast<int>(g[0]), g[1], g[2], g[3], g[4]);
      BoundInputs in{static_cast<int>(g[0]), g[1], false, 0.0, s.alpha,
                     s.T,                   g[4], g[2]};
      record_excess(nc_bound(in), g[3]);
    }
    results.push_back(make_result("schedule feeds back a bound <= epsilon",
                                  violations == 0, worst_excess, 0.0));
  }

  // Accumulation-scale identities recomputed in extended precision.
  {
    double worst_rel = 0.0;
    for (int instance = 0; instance < 20; ++instance) {
      const int d = 1 + static_cast<int>(next_uniform(stream) * 100.0);
      const long T = 1 + static_cast<long>(next_uniform(stream) * 20000.0);
      const double delta = 0.001 + 0.99 * next_uniform(stream);
      const double L = 0.1 + 5.0 * next_uniform(stream);
      const double alpha = 1e-4 + next_uniform(stream);
      const AccumulationScale s = accumulation_scale(d, T, delta, L, alpha);
      const long double tau = std::log(2.0L / static_cast<long double>(delta));
      const long double dT = static_cast<long double>(d) * T;
      const long double U = dT + 2.0L * std::sqrt(dT * tau) + 2.0L * tau;
      const long double A = static_cast<long double>(L) *
                            static_cast<long double>(alpha) *
                            static_cast<long double>(alpha) * U / 16.0L;
      worst_rel = std::max(
          worst_rel,
          static_cast<double>(std::fabs((s.tau_delta - tau) / tau)));
      worst_rel = std::max(
          worst_rel, static_cast<double>(std::fabs((s.U_T - U) / U)));
      worst_rel = std::max(
          worst_rel, static_cast<double>(std::fabs((s.A_alpha_T - A) / A)));
    }
    results.push_back(make_result("accumulation-scale identities",
                                  worst_rel <= 1e-12, worst_rel, 1e-12));
  }
  return results;
}

std::vector<CheckResult> comparison_checks() {
  std::vector<CheckResult> results;

  double worst = 0.0;
  for (const double delta : {0.5, 0.1, 0.01}) {
    const ComparisonTable table =
        comparison_table(10, 1.0, 0.1, 1.0, 1.0, 1e-3, delta);
    worst = std::max(worst, std::fabs(table.sc_alpha_ratio_markov_over_ours -
                                      std::sqrt(delta)));
  }
  results.push_back(make_result(
      "sc smoothing-radius ratio equals sqrt(delta)", worst <= 1e-12, worst,
      1e-12));

  const auto nc_ratio = [](int d) {
    return comparison_table(d, 1.0, 0.1, 1.0, 1.0, 1e-3, 0.1)
        .nc_alpha_ratio_ours_over_expectation;
  };
  const double decade1 = nc_ratio(100) / nc_ratio(10);
  const double decade2 = nc_ratio(1000) / nc_ratio(100);
  const double err = std::max(std::fabs(decade1 - std::sqrt(10.0)),
                              std::fabs(decade2 - std::sqrt(10.0)));
  results.push_back(make_result(
      "nc smoothing-radius ratio grows by sqrt(10) per decade", err <= 1e-9,
      err, 1e-9));

  const ComparisonTable table =
      comparison_table(10, 1.0, 0.1, 1.0, 1.0, 1e-3, 0.1);
  bool structure = table.rows.size() == 9;
  for (const char* regime : {"strongly_convex", "convex", "nonconvex"}) {
    for (const char* method : {"expectation", "markov", "ours"}) {
      structure =
          structure &&
          std::any_of(table.rows.begin(), table.rows.end(),
                      [&](const ComparisonRow& row) {
                        return row.regime == regime && row.method == method;
                      });
    }
  }
  results.push_back(
      {"comparison table row structure", structure,
       structure ? "3 regimes x 3 methods" : "missing rows"});
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace zogd
