#pragma once

// Post-hoc checks of a candidate choreography: Fourier tail, action
// gradient and the residual of the equations of motion on the disk.

#include <string>
#include <vector>

#include "hypchoreo/choreography.hpp"

namespace hypchoreo {

/// Terms of the disk equations of motion for body 0 against bodies
/// i = 1..n-1 at each node: conformal factor lambda, P_{0,i} and Theta_{0,i}.
struct ResidualTerms {
  std::vector<double> lambda;               // [node]
  std::vector<std::vector<cplx>> P;         // [i-1][node]
  std::vector<std::vector<double>> Theta;   // [i-1][node]
};

/// Evaluated at the N equispaced nodes (default: the path's own 2K+1 nodes).
ResidualTerms residual_terms(const TrigPath& path, const Configuration& config, int N = 0);

/// Relative 2-norm of (z'' - rhs) over the nodes, normalized by ||z''||.
/// In a rotating frame z'' is the inertial acceleration. Uses the planar
/// Newtonian equations when the configuration is planar.
double motion_residual(const TrigPath& path, const Configuration& config, int N = 0);
double motion_residual(const Choreography& choreo);

/// Same check on the hyperboloid, from the lifted extrinsic coordinates.
double extrinsic_motion_residual(const TrigPath& path, const Configuration& config, int N = 0);

/// max(|c_{-K}|, |c_K|).
double coefficient_decay(const TrigPath& path);

/// ||grad A||_2 / ||vars||_2.
double relative_gradient_norm(const Eigen::VectorXd& gradient, const Eigen::VectorXd& vars);

struct Thresholds {
  double decay = 1e-8;
  double gradient = 1e-8;
  double residual = 1e-8;
};

struct Verification {
  double decay = 0.0;
  double gradient = 0.0;
  double residual = 0.0;
  bool passed = false;
  /// Failed checks separated by "; ", or the geometry error that stopped
  /// evaluation. Empty when passed.
  std::string failure;
};

Verification verify_all(const TrigPath& path, const Configuration& config,
                        const Thresholds& thresholds);
Verification verify_all(const Choreography& choreo, const Thresholds& thresholds);

}  // namespace hypchoreo
