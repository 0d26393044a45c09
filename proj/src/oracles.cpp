#include "zogd/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <sstream>

#include "zogd/errors.hpp"
#include "zogd/sampling.hpp"

namespace zogd {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::strongly_convex:
      return "strongly_convex";
    case Regime::convex:
      return "convex";
    case Regime::nonconvex:
      return "nonconvex";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "strongly_convex" || name == "sc") return Regime::strongly_convex;
  if (name == "convex" || name == "cvx") return Regime::convex;
  if (name == "nonconvex" || name == "nc") return Regime::nonconvex;
  throw InvalidInputError("unknown regime: " + name);
}

namespace {

void check_point(const ProblemSpec& problem, const Eigen::VectorXd& x) {
  if (x.size() != problem.d) {
    std::ostringstream msg;
    msg << problem.name << ": point has dimension " << x.size()
        << ", expected " << problem.d;
    throw InvalidInputError(msg.str());
  }
  if (!x.allFinite()) {
    throw InvalidInputError(problem.name + ": non-finite input coordinate");
  }
}

}  // namespace

double ProblemSpec::value(const Eigen::VectorXd& x) const {
  check_point(*this, x);
  const double fx = value_fn(x);
  if (!std::isfinite(fx)) {
    throw OracleOverflowError(name + ": oracle produced a non-finite value",
                              x);
  }
  return fx;
}

double ProblemSpec::initial_gap() const {
  if (!f_star_known) {
    throw InvalidInputError(name + ": f_star unknown, initial gap undefined");
  }
  return value(x0) - f_star;
}

double evaluate(const ProblemSpec& problem, const Eigen::VectorXd& x,
                QueryLedger& ledger) {
  const double fx = problem.value(x);
  ++ledger.count;
  return fx;
}

Eigen::VectorXd gradient_reference(const ProblemSpec& problem,
                                   const Eigen::VectorXd& x) {
  check_point(problem, x);
  Eigen::VectorXd g = problem.gradient_fn(x);
  if (!g.allFinite()) {
    throw OracleOverflowError(
        problem.name + ": gradient oracle produced a non-finite value", x);
  }
  return g;
}

double level_radius(const ProblemSpec& problem, double B) {
  if (B < 0.0) {
    throw InvalidInputError("level_radius: B must be >= 0");
  }
  if (!problem.level_radius_available) {
    throw InvalidInputError(problem.name + ": level radius unavailable");
  }
  return problem.radius_fn(B);
}

namespace {

// Solves f(c * ones) - f_star = target for c >= 0 by bisection. All suite
// members with a known f_star have f(c * ones) nondecreasing in c >= 0.
void resolve_x0(ProblemSpec& spec, const X0Spec& x0) {
  switch (x0.mode) {
    case X0Spec::Mode::fill:
      spec.x0 = Eigen::VectorXd::Constant(spec.d, x0.value);
      return;
    case X0Spec::Mode::vector:
      if (x0.vec.size() != spec.d) {
        throw InvalidInputError(spec.name + ": x0 vector has wrong dimension");
      }
      spec.x0 = x0.vec;
      return;
    case X0Spec::Mode::gap:
      break;
  }
  if (!spec.f_star_known) {
    throw InvalidInputError(spec.name +
                            ": gap-mode x0 needs a known f_star");
  }
  if (!(x0.value >= 0.0)) {
    throw InvalidInputError(spec.name + ": gap target must be >= 0");
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(spec.d);
  const auto gap_at = [&](double c) {
    return spec.value_fn(c * ones) - spec.f_star;
  };
  if (gap_at(0.0) > x0.value + 1e-12 * (1.0 + x0.value)) {
    throw InvalidInputError(spec.name +
                            ": gap target below the minimum achievable gap");
  }
  double hi = 1.0;
  int guard = 0;
  while (gap_at(hi) < x0.value && guard++ < 2000) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap_at(mid) < x0.value ? lo : hi) = mid;
  }
  spec.x0 = Eigen::VectorXd::Constant(spec.d, hi);
}

ProblemSpec make_diag_quadratic(std::string name, Eigen::VectorXd lambda,
                                double mu_declared, double L_declared,
                                const X0Spec& x0) {
  ProblemSpec spec;
  spec.name = std::move(name);
  spec.d = static_cast<int>(lambda.size());
  spec.smoothness_L = L_declared;
  spec.strong_convexity_mu = mu_declared;
  spec.regime = mu_declared > 0.0 ? Regime::strongly_convex : Regime::convex;
  spec.f_star_known = true;
  spec.f_star = 0.0;
  spec.x_star_known = true;
  spec.x_star = Eigen::VectorXd::Zero(spec.d);

  auto eigs = std::make_shared<const Eigen::VectorXd>(std::move(lambda));
  spec.value_fn = [eigs](const Eigen::VectorXd& x) {
    return 0.5 * x.cwiseProduct(*eigs).dot(x);
  };
  spec.gradient_fn = [eigs](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(eigs->cwiseProduct(x));
  };

  resolve_x0(spec, x0);

  double lpos_min = 0.0;
  for (int i = 0; i < eigs->size(); ++i) {
    const double v = (*eigs)[i];
    if (v > 0.0 && (lpos_min == 0.0 || v < lpos_min)) lpos_min = v;
  }
  if (lpos_min > 0.0) {
    const double f0 = spec.value_fn(spec.x0);
    spec.level_radius_available = true;
    spec.radius_fn = [f0, lpos_min](double B) {
      return std::sqrt(2.0 * (f0 + B) / lpos_min);
    };
  }
  return spec;
}

}  // namespace

ProblemSpec make_sphere(int d, double mu, const X0Spec& x0) {
  if (d < 1) throw InvalidInputError("sphere: d must be >= 1");
  if (!(mu > 0.0 && mu <= 1.0)) {
    throw InvalidInputError("sphere: mu must be in (0, 1]");
  }
  return make_diag_quadratic("sphere", Eigen::VectorXd::Constant(d, mu), mu,
                             1.0, x0);
}

ProblemSpec make_aniso_quad(int d, double mu, double L, const X0Spec& x0) {
  if (d < 1) throw InvalidInputError("aniso_quad: d must be >= 1");
  if (!(mu > 0.0 && mu <= L)) {
    throw InvalidInputError("aniso_quad: need 0 < mu <= L");
  }
  Eigen::VectorXd lambda(d);
  if (d == 1) {
    lambda[0] = L;
  } else {
    lambda = Eigen::VectorXd::LinSpaced(d, mu, L);
  }
  return make_diag_quadratic("aniso_quad", std::move(lambda), mu, L, x0);
}

ProblemSpec make_singular_quad(int d, int zeros, double lpos, double L,
                               const X0Spec& x0) {
  if (d < 2) throw InvalidInputError("singular_quad: d must be >= 2");
  if (zeros < 1 || zeros >= d) {
    throw InvalidInputError("singular_quad: need 1 <= zeros < d");
  }
  if (!(lpos > 0.0 && lpos <= L)) {
    throw InvalidInputError("singular_quad: need 0 < lpos <= L");
  }
  const int pos = d - zeros;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(d);
  if (pos == 1) {
    lambda[d - 1] = L;
  } else {
    lambda.tail(pos) = Eigen::VectorXd::LinSpaced(pos, lpos, L);
  }
  return make_diag_quadratic("singular_quad", std::move(lambda), 0.0, L, x0);
}

ProblemSpec make_log_sum_exp(int d, int terms, double scale,
                             std::uint64_t gen_seed, const X0Spec& x0) {
  if (d < 1) throw InvalidInputError("log_sum_exp: d must be >= 1");
  if (terms < 2) throw InvalidInputError("log_sum_exp: need at least 2 terms");
  if (!(scale > 0.0)) throw InvalidInputError("log_sum_exp: scale must be > 0");

  SeedStream gen{gen_seed, 0, 0};
  Eigen::MatrixXd a_rows(terms, d);
  Eigen::VectorXd offsets(terms);
  for (int j = 0; j < terms; ++j) {
    const Direction row = sample_direction(gen, d);
    a_rows.row(j) = scale * row.u.transpose();
    double z0, z1;
    next_normal_pair(gen, z0, z1);
    offsets[j] = z0;
  }

  ProblemSpec spec;
  spec.name = "log_sum_exp";
  spec.d = d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_rows.transpose() *
                                                    a_rows);
  spec.smoothness_L = es.eigenvalues().maxCoeff();
  spec.regime = Regime::convex;

  auto mat = std::make_shared<const Eigen::MatrixXd>(std::move(a_rows));
  auto off = std::make_shared<const Eigen::VectorXd>(std::move(offsets));
  spec.value_fn = [mat, off](const Eigen::VectorXd& x) {
    const Eigen::VectorXd z = (*mat) * x + (*off);
    const double m = z.maxCoeff();
    return m + std::log((z.array() - m).exp().sum());
  };
  spec.gradient_fn = [mat, off](const Eigen::VectorXd& x) {
    const Eigen::VectorXd z = (*mat) * x + (*off);
    const double m = z.maxCoeff();
    Eigen::ArrayXd p = (z.array() - m).exp();
    p /= p.sum();
    return Eigen::VectorXd(mat->transpose() * p.matrix());
  };

  resolve_x0(spec, x0);
  return spec;
}

ProblemSpec make_cosine_mix(int d, const X0Spec& x0) {
  if (d < 1) throw InvalidInputError("cosine_mix: d must be >= 1");
  ProblemSpec spec;
  spec.name = "cosine_mix";
  spec.d = d;
  spec.smoothness_L = 2.0;
  spec.regime = Regime::nonconvex;
  spec.f_star_known = true;
  spec.f_star = -static_cast<double>(d);
  spec.value_fn = [](const Eigen::VectorXd& x) {
    return 0.5 * x.squaredNorm() + x.array().cos().sum();
  };
  spec.gradient_fn = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(x.array() - x.array().sin());
  };
  resolve_x0(spec, x0);
  return spec;
}

namespace {

double take_scalar(std::map<std::string, double>& scalars,
                   const std::string& key, double fallback) {
  const auto it = scalars.find(key);
  if (it == scalars.end()) return fallback;
  const double v = it->second;
  scalars.erase(it);
  return v;
}

double require_scalar(std::map<std::string, double>& scalars,
                      const std::string& key, const std::string& name) {
  const auto it = scalars.find(key);
  if (it == scalars.end()) {
    throw InvalidInputError(name + ": missing required parameter '" + key +
                            "'");
  }
  const double v = it->second;
  scalars.erase(it);
  return v;
}

int as_int(double v, const std::string& what) {
  const double r = std::round(v);
  if (std::fabs(v - r) > 1e-9 || !std::isfinite(v)) {
    throw InvalidInputError(what + " must be an integer");
  }
  return static_cast<int>(r);
}

}  // namespace

ProblemSpec make_problem(const std::string& name,
                         const ProblemParams& params) {
  std::map<std::string, double> scalars = params.scalars;
  ProblemSpec spec;
  if (name == "sphere") {
    const int d = as_int(require_scalar(scalars, "d", name), "d");
    const double mu = take_scalar(scalars, "mu", 1.0);
    spec = make_sphere(d, mu, params.x0);
  } else if (name == "quad1d") {
    spec = make_sphere(1, 1.0, params.x0);
    spec.name = "quad1d";
  } else if (name == "aniso_quad") {
    const int d = as_int(require_scalar(scalars, "d", name), "d");
    const double mu = take_scalar(scalars, "mu", 0.1);
    const double L = take_scalar(scalars, "L", 1.0);
    spec = make_aniso_quad(d, mu, L, params.x0);
  } else if (name == "singular_quad") {
    const int d = as_int(require_scalar(scalars, "d", name), "d");
    const int zeros = as_int(take_scalar(scalars, "zeros", 1.0), "zeros");
    const double lpos = take_scalar(scalars, "lpos", 1.0);
    const double L = take_scalar(scalars, "L", 1.0);
    spec = make_singular_quad(d, zeros, lpos, L, params.x0);
  } else if (name == "log_sum_exp") {
    const int d = as_int(require_scalar(scalars, "d", name), "d");
    const int terms = as_int(take_scalar(scalars, "terms", 3.0 * d), "terms");
    const double scale = take_scalar(scalars, "scale", 1.0);
    const auto gen_seed = static_cast<std::uint64_t>(
        as_int(take_scalar(scalars, "gen_seed", 7.0), "gen_seed"));
    spec = make_log_sum_exp(d, terms, scale, gen_seed, params.x0);
  } else if (name == "cosine_mix") {
    const int d = as_int(require_scalar(scalars, "d", name), "d");
    spec = make_cosine_mix(d, params.x0);
  } else {
    throw InvalidInputError("unknown problem name: " + name);
  }
  if (!scalars.empty()) {
    throw InvalidInputError(name + ": unknown parameter '" +
                            scalars.begin()->first + "'");
  }
  return spec;
}

}  // namespace zogd
