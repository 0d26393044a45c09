#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace zogd {

enum class Regime { strongly_convex, convex, nonconvex };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

/// Counts charged function-value queries. One ledger per trajectory; the
/// optimizer charges exactly two queries per iteration.
struct QueryLedger {
  long count = 0;
};

/// A test objective with its declared analytic constants. Immutable once
/// built and freely shareable across threads.
///
/// `value_fn` / `gradient_fn` are the raw oracles; `evaluate` below is the
/// ledger-charging entry point used by the optimizer. `radius_fn`, when
/// available, maps an enlargement B >= 0 to the supremum distance-to-solution
/// over the level set { x : f(x) <= f(x0) + B }.
struct ProblemSpec {
  std::string name;
  int d = 0;
  double smoothness_L = 0.0;
  double strong_convexity_mu = 0.0;  // 0 means not strongly convex
  Regime regime = Regime::convex;
  bool f_star_known = false;
  double f_star = 0.0;
  bool x_star_known = false;
  Eigen::VectorXd x_star;
  Eigen::VectorXd x0;
  bool level_radius_available = false;

  std::function<double(const Eigen::VectorXd&)> value_fn;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient_fn;
  std::function<double(double)> radius_fn;

  /// Raw objective value with input/output validation, not charged anywhere.
  double value(const Eigen::VectorXd& x) const;

  /// Initial optimality gap f(x0) - f_star. Requires a known f_star.
  double initial_gap() const;
};

/// Charged oracle call: validates x, returns f(x), increments ledger.count.
double evaluate(const ProblemSpec& problem, const Eigen::VectorXd& x,
                QueryLedger& ledger);

/// Analytic gradient for diagnostics. Never charged to a query ledger.
Eigen::VectorXd gradient_reference(const ProblemSpec& problem,
                                   const Eigen::VectorXd& x);

/// Level-set distance-to-solution radius R(B). Throws InvalidInputError when
/// B < 0 or the problem does not provide an analytic radius.
double level_radius(const ProblemSpec& problem, double B);

/// How the starting point is chosen when building a suite problem.
struct X0Spec {
  enum class Mode {
    fill,    // x0 = value * ones
    vector,  // x0 = vec
    gap,     // x0 = c * ones with c >= 0 solved so f(x0) - f_star = value
  };
  Mode mode = Mode::fill;
  double value = 1.0;
  Eigen::VectorXd vec;

  static X0Spec fill(double v) { return {Mode::fill, v, {}}; }
  static X0Spec vector(Eigen::VectorXd v) {
    return {Mode::vector, 0.0, std::move(v)};
  }
  static X0Spec gap(double target) { return {Mode::gap, target, {}}; }
};

// Suite factories. Each member declares exact constants for its regime.

/// f(x) = mu/2 |x|^2 with declared smoothness constant 1 (requires mu <= 1).
ProblemSpec make_sphere(int d, double mu, const X0Spec& x0);

/// f(x) = 1/2 x^T diag(lambda) x with lambda linearly spaced on [mu, L].
ProblemSpec make_aniso_quad(int d, double mu, double L, const X0Spec& x0);

/// f(x) = 1/2 x^T diag(0,...,0, lpos,...,L) x with `zeros` zero eigenvalues
/// and the positive ones linearly spaced on [lpos, L]. Convex, not strongly
/// convex; the level radius uses the smallest positive eigenvalue.
ProblemSpec make_singular_quad(int d, int zeros, double lpos, double L,
                               const X0Spec& x0);

/// f(x) = log sum_j exp(a_j . x + b_j) with A, b generated from gen_seed.
/// Declared smoothness is the conservative sigma_max(A)^2. f_star and the
/// level radius are unavailable.
ProblemSpec make_log_sum_exp(int d, int terms, double scale,
                             std::uint64_t gen_seed, const X0Spec& x0);

/// f(x) = 1/2 |x|^2 + sum_i cos(x_i), L = 2, declared lower bound
/// f_star = -d (the certified infimum bound, not the attained minimum).
ProblemSpec make_cosine_mix(int d, const X0Spec& x0);

/// Name + parameter-map construction used by the experiment config.
/// Unknown names or parameters are errors.
struct ProblemParams {
  std::map<std::string, double> scalars;
  X0Spec x0 = X0Spec::fill(1.0);
};
ProblemSpec make_problem(const std::string& name, const ProblemParams& params);

}  // namespace zogd
