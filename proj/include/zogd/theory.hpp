#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "zogd/optimizer.hpp"

namespace zogd {

/// Symbols shared by the three finite-horizon bound evaluators.
struct BoundInputs {
  int d = 0;
  double L = 0.0;
  bool has_mu = false;
  double mu = 0.0;
  double alpha = 0.0;
  long T = 0;
  double delta = 0.0;
  double Delta0 = 0.0;
  bool has_R = false;
  double R = 0.0;
};

/// Coefficient of d L alpha^2 / 16 in the strongly convex bound's smoothing
/// term: 1004 + 1000 (log(3/delta) + loglog(2T)) + 32 d L / mu + 3 log(3/delta).
double sc_smoothing_coefficient(int d, double L, double mu, long T,
                                double delta);

/// The decay part exp(-(mu/8L)(T/2d - 6 log(3/delta)/d)) * Delta0.
double sc_bound_decay_term(const BoundInputs& in);

/// Full strongly convex finite-horizon bound (decay + smoothing terms).
double sc_bound(const BoundInputs& in);

/// Convex finite-horizon bound. Requires T > 12 log(2/delta) and R present.
/// simple = true drops the 1/(Delta0 + A) term from the harmonic denominator.
double cvx_bound(const BoundInputs& in, bool simple);

/// Nonconvex average-stationarity bound
/// L (32 d + 16 log(2/delta)) (Delta0 + A_alpha_T) / T.
double nc_bound(const BoundInputs& in);

/// Capped exponential decay weights rho_k, k = 0..T-1, used by the strongly
/// convex smoothing-error event.
std::vector<double> rho_weights(long T, int d, double mu, double L,
                                double delta2);

/// Chi-square concentration caps at exponent tau:
/// upper = k + 2 sqrt(k tau) + 2 tau, lower = k - 2 sqrt(k tau).
struct ChiSquareCaps {
  double upper = 0.0;
  double lower = 0.0;
};
ChiSquareCaps chi_square_caps(double k_dof, double tau);

/// Weighted chi-square cap
/// sum w + 2 sqrt(sum w^2 log(1/delta)) + 2 max(w) log(1/delta).
double weighted_chi_square_cap(std::span<const double> weights, double delta);

/// Freedman linear-form cap lambda W / (2 (1 - lambda R / 3)) + log(1/delta)/lambda,
/// valid for 0 < lambda < 3/R.
double freedman_linear_cap(double W, double R, double lambda, double delta);

/// Freedman tail exp(-tau^2 / (2 (sigma2 + R tau))).
double freedman_tail(double tau, double sigma2, double R);

/// Ville tail 1/y for a nonnegative supermartingale started at 1.
double ville_tail(double y);

/// Maximal Bernstein tail exp(-x^2 / (2 (N v2 + b x))).
double maximal_bernstein_tail(long N, double v2, double b, double x);

/// m-th raw moment of Beta(a, b): prod_{k=0}^{m-1} (a+k)/(a+b+k).
double beta_raw_moment(double a, double b, int m);

/// Cap 2E + (1/(h0+E) + sum(a)/4)^{-1} for the perturbed recursion
/// h_{t+1} <= h_t - a_t h_t^2 + eps_t, with the inverse term zero when
/// h0 + E = 0.
double perturbed_recursion_cap(double h0, std::span<const double> a_seq,
                               std::span<const double> eps_seq);

/// High-probability lower floors for sums of squared normalized projections.
double unweighted_projection_floor(long T, int d, double delta);
double suffix_projection_floor(long T, long k, int d, double delta);
double weighted_projection_floor(double sum_w, double B, int d, double delta);

/// Outcome of checking the four trajectory events. A margin is >= 0 exactly
/// when the matching event holds. `share_*` records each event's allotted
/// slice of the confidence budget (thirds when mu is available, halves
/// otherwise, matching the analysis the event feeds).
struct EventReport {
  bool holds_rho1 = true;
  bool holds_rho2 = true;
  bool holds_alpha = true;
  bool holds_alpha_cvx = true;
  bool alpha_applicable = false;  // the weighted-norm event needs mu
  double margin_rho1 = 0.0;
  double margin_rho2 = 0.0;
  double margin_alpha = 0.0;
  double margin_alpha_cvx = 0.0;
  double share_rho1 = 0.0;
  double share_rho2 = 0.0;
  double share_alpha = 0.0;
  double share_alpha_cvx = 0.0;
};

/// Evaluates the projection-sum, suffix-sum, weighted-norm, and accumulated
/// smoothing-error events on a recorded trajectory.
EventReport check_events(const TrajectoryRecord& trajectory,
                         const BoundInputs& in);

nlohmann::json event_report_json(const EventReport& report);

/// Per-iteration inequality audit of a recorded trajectory:
///   descent   f_{t+1} <= f_t - zeta_t w_t / (16 L) + Delta_t + 1e-8 (1+|f_t|)
///   residual  |beta_t| <= L alpha u2_t / 2 + 1e-9
///   smoothing Delta_t <= L alpha^2 u2_t / 16 + 1e-9
///   telescope f_{t+1} <= f_t + Delta_t + 1e-9
struct PathwiseAudit {
  long descent_violations = 0;
  long residual_violations = 0;
  long smoothing_violations = 0;
  long telescoping_violations = 0;

  long total() const {
    return descent_violations + residual_violations + smoothing_violations +
           telescoping_violations;
  }
};

PathwiseAudit audit_trajectory(const TrajectoryRecord& trajectory,
                               double L_used, double alpha);

}  // namespace zogd
