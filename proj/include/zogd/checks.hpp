#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zogd {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Distributional battery: KS of the squared normalized projection against
/// Beta(1/2, (d-1)/2) at the 1% level for d in {2, 3, 10, 100}, the 1/d mean
/// within 3 Monte Carlo standard errors, and the raw-moment product formula
/// for m in {1, 2, 3}.
std::vector<CheckResult> distribution_checks(std::uint64_t seed, long samples);

/// Concentration battery: chi-square cap exceedance frequencies, trajectory
/// event failure frequencies at d in {2, 10}, and the maximal Bernstein tail
/// on a synthetic bounded-difference martingale.
std::vector<CheckResult> concentration_checks(std::uint64_t seed,
                                              long samples);

/// Deterministic formula battery: perturbed-recursion domination, decay
/// weight sum caps, schedule/bound mutual consistency, and accumulation-scale
/// identities.
std::vector<CheckResult> formula_checks(std::uint64_t seed);

/// Comparison-table battery: smoothing-radius ratio columns.
std::vector<CheckResult> comparison_checks();

/// True when every result passed.
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace zogd
