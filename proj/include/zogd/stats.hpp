#pragma once

#include <functional>
#include <vector>

namespace zogd {

/// log of the Euler beta function B(a, b), a, b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a, b) for x in [0, 1], a, b > 0.
/// Evaluated by the Lentz continued fraction with the usual symmetry split.
double regularized_incomplete_beta(double x, double a, double b);

/// CDF of Beta(a, b) at x.
inline double beta_cdf(double x, double a, double b) {
  return regularized_incomplete_beta(x, a, b);
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against the continuous
/// CDF `cdf`. Samples are copied and sorted internally.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

}  // namespace zogd
