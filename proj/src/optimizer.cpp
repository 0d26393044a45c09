#include "zogd/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "zogd/errors.hpp"

namespace zogd {

void RunParams::validate() const {
  if (T < 1) throw InvalidInputError("RunParams: T must be >= 1");
  if (!(alpha > 0.0)) throw InvalidInputError("RunParams: alpha must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("RunParams: delta must be in (0, 1)");
  }
  if (!(epsilon > 0.0)) {
    throw InvalidInputError("RunParams: epsilon must be > 0");
  }
  if (!(L_used > 0.0)) {
    throw InvalidInputError("RunParams: L_used must be > 0");
  }
}

namespace {

double fd_coefficient(const ProblemSpec& problem, const Eigen::VectorXd& x,
                      const Direction& u, double alpha, QueryLedger& ledger) {
  if (!(alpha > 0.0)) {
    throw InvalidInputError("two-point estimator: alpha must be > 0");
  }
  const double f_plus = evaluate(problem, x + alpha * u.u, ledger);
  const double f_minus = evaluate(problem, x - alpha * u.u, ledger);
  return (f_plus - f_minus) / (2.0 * alpha);
}

}  // namespace

Eigen::VectorXd two_point_gradient(const ProblemSpec& problem,
                                   const Eigen::VectorXd& x,
                                   const Direction& u, double alpha,
                                   QueryLedger& ledger) {
  return fd_coefficient(problem, x, u, alpha, ledger) * u.u;
}

double finite_difference_residual(const ProblemSpec& problem,
                                  const Eigen::VectorXd& x, const Direction& u,
                                  double alpha) {
  QueryLedger scratch;
  const double coeff = fd_coefficient(problem, x, u, alpha, scratch);
  return coeff - u.u.dot(gradient_reference(problem, x));
}

Eigen::VectorXd normalized_step(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& g, const Direction& u,
                                double L_used) {
  if (!(u.norm_sq > 0.0)) {
    throw InvalidInputError("normalized_step: direction has zero norm");
  }
  return x - g / (4.0 * L_used * u.norm_sq);
}

TrajectoryRecord run_trajectory(const ProblemSpec& problem,
                                const RunParams& params) {
  params.validate();
  if (problem.x0.size() != problem.d) {
    throw InvalidInputError(problem.name + ": x0 dimension mismatch");
  }

  TrajectoryRecord record;
  record.steps.reserve(static_cast<std::size_t>(params.T));
  SeedStream stream = params.stream;
  Eigen::VectorXd x = problem.x0;
  const double zero_grad_threshold = 1e-14;

  try {
    for (long t = 0; t < params.T; ++t) {
      const Direction u = sample_direction(stream, problem.d,
                                           &record.rejections);
      StepRecord step;
      step.t = t;
      step.f_before = problem.value(x);
      step.u_norm_sq = u.norm_sq;
      step.eta = 1.0 / (4.0 * params.L_used * u.norm_sq);

      const Eigen::VectorXd grad = gradient_reference(problem, x);
      const double grad_norm = grad.norm();
      step.grad_norm_sq = grad_norm * grad_norm;
      if (grad_norm >= zero_grad_threshold) {
        step.zeta = squared_normalized_projection(u, grad / grad_norm);
      } else {
        step.zeta =
            squared_normalized_projection(u, Eigen::VectorXd::Unit(problem.d, 0));
      }

      const double coeff =
          fd_coefficient(problem, x, u, params.alpha, record.queries);
      step.beta = coeff - u.u.dot(grad);
      step.delta_alpha = 0.5 * step.eta * step.beta * step.beta +
                         params.L_used * step.eta * step.eta * step.beta *
                             step.beta * u.norm_sq;

      x = normalized_step(x, coeff * u.u, u, params.L_used);
      record.steps.push_back(step);
    }
    record.x_final = x;
    record.f_final = problem.value(x);
  } catch (const OracleOverflowError& err) {
    record.aborted = true;
    record.abort_reason = err.what();
    record.x_final = x;
    record.f_final = std::numeric_limits<double>::quiet_NaN();
  } catch (const InvalidInputError& err) {
    // Divergent iterates can push x out of the oracle's domain; treat that
    // the same way as an oracle overflow.
    record.aborted = true;
    record.abort_reason = err.what();
    record.x_final = x;
    record.f_final = std::numeric_limits<double>::quiet_NaN();
  }
  return record;
}

std::string trajectory_csv(const TrajectoryRecord& record) {
  std::string out = "t,f,grad_norm_sq,zeta,u_norm_sq,beta,delta_alpha,eta\n";
  char line[256];
  for (const StepRecord& s : record.steps) {
    std::snprintf(line, sizeof(line),
                  "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                  s.f_before, s.grad_norm_sq, s.zeta, s.u_norm_sq, s.beta,
                  s.delta_alpha, s.eta);
    out += line;
  }
  return out;
}

void write_trajectory_csv(const TrajectoryRecord& record,
                          const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw IoError("cannot open for writing: " + path);
  }
  file << trajectory_csv(record);
  if (!file) {
    throw IoError("write failed: " + path);
  }
}

}  // namespace zogd
