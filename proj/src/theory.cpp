#include "zogd/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zogd/errors.hpp"
#include "zogd/schedules.hpp"

namespace zogd {

namespace {

double loglog(double x) { return std::log(std::log(x)); }

void check_common(const BoundInputs& in) {
  if (in.d < 1) throw InvalidInputError("bound: d must be >= 1");
  if (!(in.L > 0.0)) throw InvalidInputError("bound: L must be > 0");
  if (in.T < 1) throw InvalidInputError("bound: T must be >= 1");
  if (!(in.delta > 0.0 && in.delta < 1.0)) {
    throw InvalidInputError("bound: delta must be in (0, 1)");
  }
  if (!(in.alpha >= 0.0)) throw InvalidInputError("bound: alpha must be >= 0");
}

}  // namespace

double sc_smoothing_coefficient(int d, double L, double mu, long T,
                                double delta) {
  const double log3d = std::log(3.0 / delta);
  return 1004.0 + 1000.0 * (log3d + loglog(2.0 * static_cast<double>(T))) +
         32.0 * static_cast<double>(d) * L / mu + 3.0 * log3d;
}

double sc_bound_decay_term(const BoundInputs& in) {
  const double dd = static_cast<double>(in.d);
  const double exponent =
      -(in.mu / (8.0 * in.L)) * (static_cast<double>(in.T) / (2.0 * dd) -
                                 6.0 * std::log(3.0 / in.delta) / dd);
  return std::exp(exponent) * in.Delta0;
}

double sc_bound(const BoundInputs& in) {
  check_common(in);
  if (!in.has_mu || !(in.mu > 0.0 && in.mu <= in.L)) {
    throw InvalidInputError("sc_bound: need 0 < mu <= L");
  }
  const double dd = static_cast<double>(in.d);
  const double smoothing =
      dd * in.L * in.alpha * in.alpha / 16.0 *
      sc_smoothing_coefficient(in.d, in.L, in.mu, in.T, in.delta);
  return sc_bound_decay_term(in) + smoothing;
}

double cvx_bound(const BoundInputs& in, bool simple) {
  check_common(in);
  if (!in.has_R || in.R < 0.0) {
    throw InvalidInputError("cvx_bound: level radius required");
  }
  const double slack =
      static_cast<double>(in.T) - 12.0 * std::log(2.0 / in.delta);
  if (!(slack > 0.0)) {
    throw HorizonTooShortError("cvx_bound: T must exceed 12 log(2/delta)");
  }
  const double A =
      in.alpha > 0.0
          ? accumulation_scale(in.d, in.T, in.delta, in.L, in.alpha).A_alpha_T
          : 0.0;
  const double dd = static_cast<double>(in.d);
  if (in.R == 0.0) return 2.0 * A;
  const double rate = slack / (128.0 * dd * in.L * in.R * in.R);
  if (simple) return 2.0 * A + 1.0 / rate;
  const double mass = in.Delta0 + A;
  if (mass == 0.0) return 2.0 * A;
  return 2.0 * A + 1.0 / (1.0 / mass + rate);
}

double nc_bound(const BoundInputs& in) {
  check_common(in);
  if (in.Delta0 < 0.0) {
    throw InvalidInputError("nc_bound: Delta0 must be >= 0");
  }
  const double A =
      in.alpha > 0.0
          ? accumulation_scale(in.d, in.T, in.delta, in.L, in.alpha).A_alpha_T
          : 0.0;
  const double tau = std::log(2.0 / in.delta);
  return in.L * (32.0 * static_cast<double>(in.d) + 16.0 * tau) *
         (in.Delta0 + A) / static_cast<double>(in.T);
}

std::vector<double> rho_weights(long T, int d, double mu, double L,
                                double delta2) {
  if (T < 1 || d < 1 || !(mu > 0.0 && mu <= L) ||
      !(delta2 > 0.0 && delta2 < 1.0)) {
    throw InvalidInputError("rho_weights: invalid parameters");
  }
  const double dd = static_cast<double>(d);
  const double log_inv = std::log(1.0 / delta2);
  std::vector<double> rho(static_cast<std::size_t>(T));
  for (long k = 0; k < T; ++k) {
    const double m = static_cast<double>(T - k);
    const double floor_term =
        (m - 501.0) / (2.0 * dd) - 250.0 / dd * (log_inv + loglog(2.0 * m));
    rho[static_cast<std::size_t>(k)] =
        std::min(1.0, std::exp(-(mu / (8.0 * L)) * floor_term));
  }
  return rho;
}

ChiSquareCaps chi_square_caps(double k_dof, double tau) {
  if (!(k_dof > 0.0) || tau < 0.0) {
    throw InvalidInputError("chi_square_caps: need k > 0 and tau >= 0");
  }
  const double spread = 2.0 * std::sqrt(k_dof * tau);
  return {k_dof + spread + 2.0 * tau, k_dof - spread};
}

double weighted_chi_square_cap(std::span<const double> weights, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("weighted_chi_square_cap: delta must be in (0,1)");
  }
  double sum = 0.0, sum_sq = 0.0, max_w = 0.0;
  for (const double w : weights) {
    if (w < 0.0) {
      throw InvalidInputError("weighted_chi_square_cap: weights must be >= 0");
    }
    sum += w;
    sum_sq += w * w;
    max_w = std::max(max_w, w);
  }
  const double log_inv = std::log(1.0 / delta);
  return sum + 2.0 * std::sqrt(sum_sq * log_inv) + 2.0 * max_w * log_inv;
}

double freedman_linear_cap(double W, double R, double lambda, double delta) {
  if (!(R > 0.0) || !(lambda > 0.0 && lambda < 3.0 / R)) {
    throw InvalidInputError("freedman_linear_cap: need 0 < lambda < 3/R");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("freedman_linear_cap: delta must be in (0,1)");
  }
  return lambda * W / (2.0 * (1.0 - lambda * R / 3.0)) +
         std::log(1.0 / delta) / lambda;
}

double freedman_tail(double tau, double sigma2, double R) {
  if (tau < 0.0 || !(sigma2 > 0.0) || !(R > 0.0)) {
    throw InvalidInputError("freedman_tail: invalid parameters");
  }
  return std::exp(-tau * tau / (2.0 * (sigma2 + R * tau)));
}

double ville_tail(double y) {
  if (!(y > 0.0)) {
    throw InvalidInputError("ville_tail: y must be > 0");
  }
  return 1.0 / y;
}

double maximal_bernstein_tail(long N, double v2, double b, double x) {
  if (N < 1 || !(v2 > 0.0) || !(b > 0.0) || x < 0.0) {
    throw InvalidInputError("maximal_bernstein_tail: invalid parameters");
  }
  return std::exp(-x * x / (2.0 * (static_cast<double>(N) * v2 + b * x)));
}

double beta_raw_moment(double a, double b, int m) {
  if (!(a > 0.0) || !(b > 0.0) || m < 1) {
    throw InvalidInputError("beta_raw_moment: need a, b > 0 and m >= 1");
  }
  double moment = 1.0;
  for (int k = 0; k < m; ++k) {
    moment *= (a + k) / (a + b + k);
  }
  return moment;
}

double perturbed_recursion_cap(double h0, std::span<const double> a_seq,
                               std::span<const double> eps_seq) {
  if (h0 < 0.0) {
    throw InvalidInputError("perturbed_recursion_cap: h0 must be >= 0");
  }
  double E = 0.0;
  for (const double e : eps_seq) {
    if (e < 0.0) {
      throw InvalidInputError("perturbed_recursion_cap: eps must be >= 0");
    }
    E += e;
  }
  double a_sum = 0.0;
  for (const double a : a_seq) {
    if (a < 0.0) {
      throw InvalidInputError("perturbed_recursion_cap: a must be >= 0");
    }
    a_sum += a;
  }
  const double mass = h0 + E;
  const double inverse_term =
      mass == 0.0 ? 0.0 : 1.0 / (1.0 / mass + a_sum / 4.0);
  return 2.0 * E + inverse_term;
}

double unweighted_projection_floor(long T, int d, double delta) {
  if (T < 1 || d < 1 || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("unweighted_projection_floor: invalid parameters");
  }
  const double dd = static_cast<double>(d);
  return static_cast<double>(T) / (2.0 * dd) -
         6.0 * std::log(1.0 / delta) / dd;
}

double suffix_projection_floor(long T, long k, int d, double delta) {
  if (T < 2 || k < 0 || k >= T - 1 || d < 1 ||
      !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("suffix_projection_floor: invalid parameters");
  }
  const double dd = static_cast<double>(d);
  const double m = static_cast<double>(T - k);
  return (m - 1.0) / (2.0 * dd) -
         250.0 / dd * (1.0 + std::log(1.0 / delta) + loglog(2.0 * m));
}

double weighted_projection_floor(double sum_w, double B, int d, double delta) {
  if (sum_w < 0.0 || B < 0.0 || d < 1 || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("weighted_projection_floor: invalid parameters");
  }
  const double dd = static_cast<double>(d);
  return sum_w / (2.0 * dd) - 4.0 * B * std::log(1.0 / delta) / dd;
}

EventReport check_events(const TrajectoryRecord& trajectory,
                         const BoundInputs& in) {
  check_common(in);
  const long T = in.T;
  if (static_cast<long>(trajectory.steps.size()) != T) {
    throw InvalidInputError("check_events: trajectory length mismatch");
  }
  EventReport report;
  report.alpha_applicable = in.has_mu && in.mu > 0.0;
  const double budget_split = report.alpha_applicable ? 3.0 : 2.0;
  const double delta_slice = in.delta / budget_split;
  const double dd = static_cast<double>(in.d);

  // Projection-sum event.
  double zeta_sum = 0.0;
  for (const StepRecord& s : trajectory.steps) zeta_sum += s.zeta;
  report.share_rho1 = delta_slice;
  report.margin_rho1 =
      zeta_sum - unweighted_projection_floor(T, in.d, delta_slice);
  report.holds_rho1 = report.margin_rho1 >= 0.0;

  // Suffix-sum event, all cut points simultaneously.
  report.share_rho2 = delta_slice;
  const double log_inv_slice = std::log(1.0 / delta_slice);
  double min_margin = std::numeric_limits<double>::infinity();
  double suffix = 0.0;
  for (long k = T - 2; k >= 0; --k) {
    suffix += trajectory.steps[static_cast<std::size_t>(k + 1)].zeta;
    const double m = static_cast<double>(T - k);
    const double floor =
        (m - 501.0) / (2.0 * dd) -
        250.0 / dd * (log_inv_slice + loglog(2.0 * m));
    min_margin = std::min(min_margin, suffix - floor);
  }
  report.margin_rho2 = T >= 2 ? min_margin : 0.0;
  report.holds_rho2 = report.margin_rho2 >= 0.0;

  // Weighted direction-norm event (needs mu).
  if (report.alpha_applicable) {
    report.share_alpha = delta_slice;
    const std::vector<double> rho =
        rho_weights(T, in.d, in.mu, in.L, delta_slice);
    double weighted_norms = 0.0;
    for (long k = 0; k < T; ++k) {
      weighted_norms += rho[static_cast<std::size_t>(k)] *
                        trajectory.steps[static_cast<std::size_t>(k)].u_norm_sq;
    }
    const double cap =
        dd * (1004.0 +
              1000.0 * (log_inv_slice + loglog(2.0 * static_cast<double>(T))) +
              32.0 * dd * in.L / in.mu + 3.0 * log_inv_slice);
    report.margin_alpha = cap - weighted_norms;
    report.holds_alpha = report.margin_alpha >= 0.0;
  }

  // Accumulated smoothing-error event; the half slice is baked into the
  // definition of A_alpha_T via tau = log(2/delta).
  report.share_alpha_cvx = in.delta / 2.0;
  double smoothing_sum = 0.0;
  for (const StepRecord& s : trajectory.steps) smoothing_sum += s.delta_alpha;
  const double A =
      in.alpha > 0.0
          ? accumulation_scale(in.d, T, in.delta, in.L, in.alpha).A_alpha_T
          : 0.0;
  report.margin_alpha_cvx = A - smoothing_sum;
  report.holds_alpha_cvx = report.margin_alpha_cvx >= 0.0;
  return report;
}

nlohmann::json event_report_json(const EventReport& report) {
  return {{"holds_rho1", report.holds_rho1},
          {"holds_rho2", report.holds_rho2},
          {"holds_alpha", report.holds_alpha},
          {"holds_alpha_cvx", report.holds_alpha_cvx},
          {"alpha_applicable", report.alpha_applicable},
          {"margin_rho1", report.margin_rho1},
          {"margin_rho2", report.margin_rho2},
          {"margin_alpha", report.margin_alpha},
          {"margin_alpha_cvx", report.margin_alpha_cvx},
          {"share_rho1", report.share_rho1},
          {"share_rho2", report.share_rho2},
          {"share_alpha", report.share_alpha},
          {"share_alpha_cvx", report.share_alpha_cvx}};
}

PathwiseAudit audit_trajectory(const TrajectoryRecord& trajectory,
                               double L_used, double alpha) {
  if (!(L_used > 0.0) || !(alpha > 0.0)) {
    throw InvalidInputError("audit_trajectory: invalid L or alpha");
  }
  PathwiseAudit audit;
  const std::size_t n = trajectory.steps.size();
  for (std::size_t t = 0; t < n; ++t) {
    const StepRecord& s = trajectory.steps[t];
    const double f_next =
        t + 1 < n ? trajectory.steps[t + 1].f_before : trajectory.f_final;
    if (trajectory.aborted && t + 1 >= n) break;

    const double descent_rhs = s.f_before -
                               s.zeta * s.grad_norm_sq / (16.0 * L_used) +
                               s.delta_alpha +
                               1e-8 * (1.0 + std::fabs(s.f_before));
    if (f_next > descent_rhs) ++audit.descent_violations;

    if (std::fabs(s.beta) > L_used * alpha * s.u_norm_sq / 2.0 + 1e-9) {
      ++audit.residual_violations;
    }
    if (s.delta_alpha > L_used * alpha * alpha * s.u_norm_sq / 16.0 + 1e-9) {
      ++audit.smoothing_violations;
    }
    if (f_next > s.f_before + s.delta_alpha + 1e-9) {
      ++audit.telescoping_violations;
    }
  }
  return audit;
}

}  // namespace zogd
