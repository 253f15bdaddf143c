#pragma once

// Families of choreographies along the curvature radius R, and their
// distance to the planar limit.

#include <string>
#include <vector>

#include "hypchoreo/optimizer.hpp"
#include "hypchoreo/verify.hpp"

namespace hypchoreo {

struct FamilyMember {
  CurvatureRadius R;
  Choreography choreo;
  /// Aligned infinity-norm distance of 2 q_R to the planar solution.
  double diff_to_planar = 0.0;
};

struct FamilySweep {
  std::vector<FamilyMember> members;
  /// Set when the sweep stopped early; members holds the converged prefix.
  std::string failure;

  bool ok() const noexcept { return failure.empty(); }
};

struct ContinuationOptions {
  Phase1Options phase1;
  /// K2 is ignored: every member keeps the bandwidth of the planar start.
  Phase2Options phase2;
  Thresholds thresholds;
};

/// The same orbit moved by an isometry so that its centroid is the origin:
/// the Lorentz mean of the lifted path on the hyperboloid, or c_0 in the
/// plane. Keeps the bandwidth of the input.
TrigPath centered(const TrigPath& path, const Configuration& config);

/// Two-phase solve of the planar Newtonian problem. Throws
/// std::invalid_argument unless config is planar.
Choreography solve_planar(const Configuration& config, const TrigPath& seed,
                          const Phase1Options& opts1, const Phase2Options& opts2);

/// Continues the planar solution into the disk along R_list (strictly
/// descending). The first member starts from half the planar path, each
/// later one from its predecessor. A member is kept only if verify_all
/// passes.
FamilySweep continue_in_R(const Choreography& planar_start, const std::vector<double>& R_list,
                          const ContinuationOptions& opts = {});

/// Planar solution of the same family as a hyperbolic choreography: Newton
/// continuation at increasing R up to max_R, then the planar problem from
/// twice the last path. Steps shrink on failure. The result keeps the
/// bandwidth of the input; report.failure is set if no step succeeds.
Choreography planar_counterpart(const Choreography& hyperbolic, double max_R = 1000.0,
                                const ContinuationOptions& opts = {});

/// max_t |2 e^{i theta} q_R(t + s) - q_inf(t)| on a grid 10x finer than
/// the larger bandwidth, minimized over the shift s and rotation theta.
/// Paths are centered first when both frames are inertial (omega = 0).
/// Throws std::invalid_argument if the body counts differ or the second
/// argument is not planar.
double planar_limit_diff(const Choreography& hyperbolic, const Choreography& planar);

/// Least-squares slope of log(diff) against log(R). Throws
/// std::invalid_argument for fewer than 3 members or a non-positive diff.
double convergence_rate(const std::vector<FamilyMember>& members);

/// Rows "family,R,diff,slope"; slope is empty with fewer than 3 members.
std::string sweep_csv(const std::string& family, const std::vector<FamilyMember>& members);

}  // namespace hypchoreo
