#include "zogd/stats.hpp"

#include <algorithm>
#include <cmath>

#include "zogd/errors.hpp"

namespace zogd {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta function, modified Lentz scheme.
// Converges quickly for x <= (a+1)/(a+b+2); the caller flips to the
// complementary tail otherwise.
double incomplete_beta_cf(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  constexpr int kMaxIter = 100000;

  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double result = d;

  for (int m = 1; m <= kMaxIter; ++m) {
    const double dm = static_cast<double>(m);
    // even step
    double numer = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + numer * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + numer / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    result *= d * c;
    // odd step
    numer = -(a + dm) * (a + b + dm) * x /
            ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + numer * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + numer / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double mult = d * c;
    result *= mult;
    if (std::fabs(mult - 1.0) < kEps) break;
  }
  return result;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidInputError("regularized_incomplete_beta: a, b must be > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidInputError("regularized_incomplete_beta: x must be in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incomplete_beta_cf(x, a, b) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                   incomplete_beta_cf(1.0 - x, b, a) / b;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw InvalidInputError("ks_statistic: empty sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double above = (static_cast<double>(i) + 1.0) / n - f;
    const double below = f - static_cast<double>(i) / n;
    stat = std::max(stat, std::max(above, below));
  }
  return stat;
}

}  // namespace zogd
