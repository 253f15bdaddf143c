#include "hypchoreo/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/LU>

#include "hypchoreo/verify.hpp"

namespace hypchoreo {

namespace {

using Clock = std::chrono::steady_clock;

// Relative size of rounding noise in the quadrature sum of the action.
constexpr double kActionNoise = 1e-13;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double reference_length(const Configuration& config) {
  return config.planar() ? 1.0 : config.R();
}

bool seed_is_feasible(const TrigPath& path, const Configuration& config) {
  const double L = reference_length(config);
  try {
    for (const auto& D : pairwise_separations(path, config)) {
      for (const auto& d : D.values) {
        if (d.real() < 0.05 * L) return false;
      }
    }
  } catch (const GeometryError&) {
    return false;
  }
  return std::isfinite(action_value(pack(path), config));
}

}  // namespace

void Phase1Options::validate() const {
  if (!(gradient_tolerance > 0.0) || !(armijo_c1 > 0.0) || !(backtrack_factor > 0.0) ||
      !(backtrack_factor < 1.0) || max_iterations < 0 || max_backtracks < 1 || stall_window < 1) {
    throw std::invalid_argument("invalid Phase 1 options");
  }
}

void Phase2Options::validate() const {
  if (!(gradient_tolerance > 0.0) || !(regularization > 0.0) ||
      !(fallback_regularization >= regularization) || !(rounding_floor >= 0.0) ||
      max_iterations < 0 || K2 < 0) {
    throw std::invalid_argument("invalid Phase 2 options");
  }
}

int Phase2Options::padded_bandwidth(int K1) const {
  const int k = K2 > 0 ? K2 : 2 * K1 - 2;
  if (k < K1) throw std::invalid_argument("Phase 2 bandwidth must not be below Phase 1's");
  return k;
}

TrigPath random_seed(const Configuration& config, int modes, std::uint64_t rng_seed) {
  config.validate();
  if (modes < 1 || modes > config.K) {
    throw std::invalid_argument("seed modes must lie in [1, K]");
  }
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(0.3, 0.6);
  const double L = reference_length(config);
  for (int draw = 0; draw < 100; ++draw) {
    TrigPath p(config.K);
    for (int k = -modes; k <= modes; ++k) {
      const double a = std::ldexp(1.0, -std::abs(k));
      const double re = normal(rng);
      const double im = normal(rng);
      p[k] = a * cplx(re, im);
    }
    const double target = radius(rng) * L;
    double peak = 0.0;
    for (const auto& z : eval_at_nodes(p, 8 * p.size()).values) peak = std::max(peak, std::abs(z));
    if (!(peak > 0.0)) continue;
    p *= target / peak;
    if (seed_is_feasible(p, config)) return p;
  }
  throw std::runtime_error("no feasible seed found after 100 draws");
}

PhaseResult bfgs_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                          const Phase1Options& opts) {
  opts.validate();
  const auto start = Clock::now();
  auto value = [&](const Eigen::VectorXd& v) { return objective(v, Derivatives::none).value; };
  PhaseResult r;
  Eigen::VectorXd x = x0;
  auto e = objective(x, Derivatives::gradient);
  if (!e.finite()) throw GeometryError(GeometryError::Kind::collision, "infeasible starting point");
  double f = e.value;
  Eigen::VectorXd g = std::move(e.gradient);
  const auto n = x.size();
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;

  r.log.push_back({0, f, relative_gradient_norm(g, x), 0.0});
  double best_gn = r.log.back().gradient_rel_norm;
  int best_it = 0;
  Eigen::VectorXd best_x = x;
  double best_f = f;
  int it = 0;
  while (true) {
    const double gn = relative_gradient_norm(g, x);
    if (gn <= opts.gradient_tolerance) {
      r.converged = true;
      break;
    }
    if (it >= opts.max_iterations) break;

    Eigen::VectorXd p = -Hinv * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      Hinv.setIdentity();
      scaled = false;
      p = -g;
      slope = -g.squaredNorm();
    }
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    double fn = 0.0;
    ActionEvaluation en;
    for (int b = 0; b < opts.max_backtracks; ++b) {
      xn = x + alpha * p;
      fn = value(xn);
      if (std::isfinite(fn) && fn <= f + opts.armijo_c1 * alpha * slope) {
        accepted = true;
        break;
      }
      // Once the decrease is below the rounding level of the action, Armijo
      // cannot be decided from values; fall back to the derivative-based
      // approximate Armijo test, allowing changes within that rounding level.
      if (std::isfinite(fn) && std::abs(fn - f) <= kActionNoise * std::abs(f)) {
        en = objective(xn, Derivatives::gradient);
        if ((2.0 * opts.armijo_c1 - 1.0) * slope >= en.gradient.dot(p)) {
          accepted = true;
          break;
        }
        en = ActionEvaluation{};
      }
      alpha *= opts.backtrack_factor;
    }
    if (!accepted) {
      r.failure = "line search found no feasible decrease";
      break;
    }
    if (en.gradient.size() == 0) en = objective(xn, Derivatives::gradient);
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = en.gradient - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        Hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      const Eigen::VectorXd Hy = Hinv * y;
      const double yHy = y.dot(Hy);
      Hinv.noalias() -= rho * (s * Hy.transpose() + Hy * s.transpose());
      Hinv.noalias() += (rho * rho * yHy + rho) * (s * s.transpose());
    }
    x = std::move(xn);
    f = fn;
    g = std::move(en.gradient);
    ++it;
    r.log.push_back({it, f, relative_gradient_norm(g, x), s.norm()});
    const double gn_new = r.log.back().gradient_rel_norm;
    if (gn_new < best_gn) {
      best_gn = gn_new;
      best_it = it;
      best_x = x;
      best_f = f;
    } else if (it - best_it >= opts.stall_window) {
      break;
    }
  }
  r.iterations = it;
  if (best_it < it) {
    // the gradient stopped improving; the last iterate drifted along a flat direction
    x = std::move(best_x);
    f = best_f;
    g = objective(x, Derivatives::gradient).gradient;
  }
  r.vars = std::move(x);
  r.action = f;
  r.gradient_rel_norm = relative_gradient_norm(g, r.vars);
  r.wall_time_seconds = seconds_since(start);
  return r;
}

PhaseResult newton_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                            const Phase2Options& opts) {
  opts.validate();
  const auto start = Clock::now();
  PhaseResult r;
  Eigen::VectorXd x = x0;
  auto e = objective(x, Derivatives::hessian);
  if (!e.finite()) throw GeometryError(GeometryError::Kind::collision, "infeasible starting point");

  double gn = relative_gradient_norm(e.gradient, x);
  r.log.push_back({0, e.value, gn, 0.0});
  Eigen::VectorXd best = x;
  double best_gn = gn;
  double best_f = e.value;
  int increases = 0;
  int it = 0;
  while (true) {
    if (gn <= opts.gradient_tolerance) {
      r.converged = true;
      break;
    }
    if (it >= opts.max_iterations) break;

    const Eigen::MatrixXd& H = *e.hessian;
    const double hnorm = H.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::VectorXd step;
    for (double eps : {opts.regularization, opts.fallback_regularization}) {
      Eigen::MatrixXd A = H;
      A.diagonal().array() += eps * hnorm;
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
      step = lu.solve(-e.gradient);
      if (step.allFinite() && lu.rcond() > 1e-15 &&
          (A * step + e.gradient).norm() <= 1e-6 * e.gradient.norm()) {
        break;
      }
    }
    if (!step.allFinite()) {
      r.failure = "Newton system could not be solved";
      break;
    }
    double alpha = 1.0;
    Eigen::VectorXd xn = x + step;
    ActionEvaluation en = objective(xn, Derivatives::hessian);
    for (int b = 0; b < 30 && !en.finite(); ++b) {
      alpha *= 0.5;
      xn = x + alpha * step;
      en = objective(xn, Derivatives::hessian);
    }
    if (!en.finite()) {
      r.failure = "Newton step left the feasible region";
      break;
    }
    ++it;
    const double gn_new = relative_gradient_norm(en.gradient, xn);
    r.log.push_back({it, en.value, gn_new, alpha * step.norm()});
    increases = gn_new > gn ? increases + 1 : 0;
    const bool stalled = gn_new > 0.5 * gn && std::min(gn, gn_new) <= opts.rounding_floor;
    x = std::move(xn);
    e = std::move(en);
    gn = gn_new;
    if (gn < best_gn) {
      best = x;
      best_gn = gn;
      best_f = e.value;
    }
    if (stalled) {
      // no further progress below the rounding floor of the gradient
      r.converged = true;
      break;
    }
    if (increases >= 2) {
      r.failure = "Newton iteration diverged";
      break;
    }
  }
  if (best_gn < gn) {
    x = best;
    gn = best_gn;
  }
  r.vars = std::move(x);
  r.action = gn == best_gn ? best_f : e.value;
  r.iterations = it;
  r.gradient_rel_norm = gn;
  r.wall_time_seconds = seconds_since(start);
  return r;
}

PhaseResult phase1_bfgs(const Eigen::VectorXd& vars0, const Configuration& config,
                        const Phase1Options& opts) {
  return bfgs_minimize(
      [&config](const Eigen::VectorXd& v, Derivatives d) { return evaluate_action(v, config, d); },
      vars0, opts);
}

PhaseResult phase2_newton(const Eigen::VectorXd& vars0, const Configuration& config,
                          const Phase2Options& opts) {
  return newton_minimize(
      [&config](const Eigen::VectorXd& v, Derivatives d) { return evaluate_action(v, config, d); },
      vars0, opts);
}

PhaseReport make_phase_report(const PhaseResult& result, const Configuration& config) {
  PhaseReport rep;
  const TrigPath path = unpack(result.vars);
  rep.action = result.action;
  rep.coefficient_count = path.size();
  rep.wall_time_seconds = result.wall_time_seconds;
  rep.iterations = result.iterations;
  rep.gradient_rel_norm = result.gradient_rel_norm;
  rep.smallest_coefficient = coefficient_decay(path);
  try {
    rep.residual_rel_norm = motion_residual(path, config);
  } catch (const GeometryError&) {
    rep.residual_rel_norm = std::numeric_limits<double>::infinity();
  }
  rep.converged = result.converged && result.failure.empty();
  return rep;
}

Choreography solve(const Configuration& config, const TrigPath& seed, const Phase1Options& opts1,
                   const Phase2Options& opts2) {
  config.validate();
  const Eigen::VectorXd x0 = pack(resize(seed, config.K));
  if (!std::isfinite(action_value(x0, config))) {
    throw GeometryError(GeometryError::Kind::collision, "seed is infeasible");
  }
  return finish_solve(config, phase1_bfgs(x0, config, opts1), opts2);
}

Choreography finish_solve(const Configuration& config, const PhaseResult& p1,
                          const Phase2Options& opts2) {
  Choreography out;
  out.config = config;
  out.report.phase1 = make_phase_report(p1, config);
  out.path = unpack(p1.vars);
  if (!p1.failure.empty()) {
    out.report.failure = "phase 1: " + p1.failure;
    return out;
  }

  Configuration cfg2 = config;
  cfg2.K = opts2.padded_bandwidth(config.K);
  const Eigen::VectorXd x2 = pack(pad(out.path, cfg2.K));
  const PhaseResult p2 = phase2_newton(x2, cfg2, opts2);
  out.config = cfg2;
  out.path = unpack(p2.vars);
  out.report.phase2 = make_phase_report(p2, cfg2);
  if (!p2.failure.empty()) out.report.failure = "phase 2: " + p2.failure;
  return out;
}

Choreography refine(const Configuration& config, const TrigPath& start, const Phase2Options& opts) {
  config.validate();
  Choreography out;
  out.config = config;
  out.config.K = opts.K2 > 0 ? opts.K2 : std::max(config.K, start.bandwidth());
  const Eigen::VectorXd x0 = pack(resize(start, out.config.K));
  const PhaseResult p2 = phase2_newton(x0, out.config, opts);
  out.path = unpack(p2.vars);
  out.report.phase2 = make_phase_report(p2, out.config);
  if (!p2.failure.empty()) out.report.failure = "phase 2: " + p2.failure;
  return out;
}

}  // namespace hypchoreo
