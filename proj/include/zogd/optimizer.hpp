#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "zogd/oracles.hpp"
#include "zogd/sampling.hpp"

namespace zogd {

/// Everything one run of the two-point descent loop needs.
struct RunParams {
  long T = 0;            // horizon, >= 1
  double alpha = 0.0;    // smoothing radius, > 0
  double delta = 0.0;    // confidence, in (0, 1)
  double epsilon = 0.0;  // target accuracy (reporting only), > 0
  double L_used = 0.0;   // smoothness constant fed to the stepsize, > 0
  SeedStream stream;

  void validate() const;
};

/// Per-iteration diagnostics.
struct StepRecord {
  long t = 0;
  double f_before = 0.0;      // f(x_t)
  double grad_norm_sq = 0.0;  // |grad f(x_t)|^2
  double zeta = 0.0;          // squared normalized projection onto the gradient
  double u_norm_sq = 0.0;     // |u_t|^2
  double beta = 0.0;          // finite-difference residual
  double delta_alpha = 0.0;   // smoothing-error term from the measured beta
  double eta = 0.0;           // normalized stepsize 1 / (4 L |u_t|^2)
};

struct TrajectoryRecord {
  std::vector<StepRecord> steps;
  Eigen::VectorXd x_final;
  double f_final = 0.0;
  QueryLedger queries;
  long rejections = 0;
  bool aborted = false;  // oracle overflow mid-run; steps holds the prefix
  std::string abort_reason;
};

/// Two-point Gaussian estimate ((f(x+au) - f(x-au)) / 2a) u. Charges exactly
/// two queries to the ledger.
Eigen::VectorXd two_point_gradient(const ProblemSpec& problem,
                                   const Eigen::VectorXd& x,
                                   const Direction& u, double alpha,
                                   QueryLedger& ledger);

/// Finite-difference residual beta = (f(x+au) - f(x-au)) / 2a - u . grad f(x).
/// Diagnostic only; its queries are not charged to any run ledger.
double finite_difference_residual(const ProblemSpec& problem,
                                  const Eigen::VectorXd& x, const Direction& u,
                                  double alpha);

/// One normalized update: x - g / (4 L_used |u|^2).
Eigen::VectorXd normalized_step(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& g, const Direction& u,
                                double L_used);

/// Runs T iterations from problem.x0, recording every step. The projection
/// reference vector is grad f(x_t) normalized when |grad f(x_t)| >= 1e-14 and
/// the first standard basis vector otherwise. Oracle overflow aborts with a
/// partial record and the error flag set instead of throwing.
TrajectoryRecord run_trajectory(const ProblemSpec& problem,
                                const RunParams& params);

/// CSV with header t,f,grad_norm_sq,zeta,u_norm_sq,beta,delta_alpha,eta and
/// one row per step, in iteration order.
std::string trajectory_csv(const TrajectoryRecord& record);
void write_trajectory_csv(const TrajectoryRecord& record,
                          const std::string& path);

}  // namespace zogd
