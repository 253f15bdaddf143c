#pragma once

// Two-phase minimization of the action: BFGS with the exact gradient on a
// small coefficient vector, then Newton with the exact Hessian after zero
// padding to a larger bandwidth.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hypchoreo/choreography.hpp"

namespace hypchoreo {

struct Phase1Options {
  int max_iterations = 500;
  /// On ||g|| / ||vars||.
  double gradient_tolerance = 1e-7;
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;
  /// Stop without convergence when the smallest gradient norm seen has not
  /// improved for this many iterations; the iterate with that norm is returned.
  int stall_window = 50;

  void validate() const;
};

struct Phase2Options {
  int max_iterations = 10;
  double gradient_tolerance = 1e-13;
  /// Padded bandwidth; 0 picks 2K - 2 from the Phase 1 bandwidth K.
  int K2 = 0;
  /// Relative shift eps in (H + eps ||H|| I) s = -g.
  double regularization = 1e-10;
  /// Shift used when the regularized system is still numerically singular.
  double fallback_regularization = 1e-8;
  /// Once the gradient norm is below this level, a step that fails to halve
  /// it means the rounding floor is reached and the phase ends converged.
  double rounding_floor = 1e-10;

  void validate() const;
  int padded_bandwidth(int K1) const;
};

struct IterationRecord {
  int iteration = 0;
  double action = 0.0;
  double gradient_rel_norm = 0.0;
  double step_norm = 0.0;
};

struct PhaseResult {
  Eigen::VectorXd vars;
  double action = 0.0;
  int iterations = 0;
  double gradient_rel_norm = 0.0;
  bool converged = false;
  /// Set when the phase stopped on an error (line-search failure,
  /// divergence); vars then holds the best iterate found.
  std::string failure;
  /// Entry 0 is the starting point.
  std::vector<IterationRecord> log;
  double wall_time_seconds = 0.0;
};

/// Deterministic random trigonometric seed with modes |k| <= modes,
/// amplitudes decaying like 2^{-|k|}, scaled so max |q| <= 0.6 R and every
/// separation D_j >= 0.05 R on the quadrature grid (R = 1 in the planar
/// problem). Throws std::runtime_error after 100 infeasible draws.
TrigPath random_seed(const Configuration& config, int modes, std::uint64_t rng_seed);

/// Objective of the generic minimizers. A non-finite value marks an
/// infeasible point; derivatives are only read at finite values.
using Objective = std::function<ActionEvaluation(const Eigen::VectorXd&, Derivatives)>;

/// BFGS with Armijo backtracking. Throws GeometryError if f(x0) is not finite.
PhaseResult bfgs_minimize(const Objective& f, const Eigen::VectorXd& x0, const Phase1Options& opts);

/// Regularized Newton iteration. Throws GeometryError if f(x0) is not finite.
PhaseResult newton_minimize(const Objective& f, const Eigen::VectorXd& x0,
                            const Phase2Options& opts);

/// bfgs_minimize and newton_minimize on the action of config.
PhaseResult phase1_bfgs(const Eigen::VectorXd& vars0, const Configuration& config,
                        const Phase1Options& opts);

PhaseResult phase2_newton(const Eigen::VectorXd& vars0, const Configuration& config,
                          const Phase2Options& opts);

/// Phase 1 on bandwidth config.K, pad, Phase 2, then fill the report.
/// Failures are recorded in report.failure; the path holds the best iterate.
Choreography solve(const Configuration& config, const TrigPath& seed, const Phase1Options& opts1,
                   const Phase2Options& opts2);

/// The part of solve after Phase 1: pads the Phase 1 result of a solve on
/// config and runs Phase 2.
Choreography finish_solve(const Configuration& config, const PhaseResult& phase1,
                          const Phase2Options& opts2);

/// Phase 2 only, starting from a path that is already close to a solution
/// (used for warm starts). Runs at bandwidth opts.K2, or max(config.K, K of
/// the start path) when opts.K2 is 0.
Choreography refine(const Configuration& config, const TrigPath& start, const Phase2Options& opts);

/// Fills a PhaseReport for a finished phase.
PhaseReport make_phase_report(const PhaseResult& result, const Configuration& config);

}  // namespace hypchoreo
