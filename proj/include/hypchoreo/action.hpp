#pragma once

// Action of an n-body choreography on the Poincare disk (absolute and
// rotating frames), with its exact gradient and Hessian with respect to the
// packed real Fourier variables. The planar Newtonian action is the R = inf
// case.

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hypchoreo/geometry.hpp"
#include "hypchoreo/trigpath.hpp"

namespace hypchoreo {

struct Configuration {
  int n = 3;
  /// Empty for the planar (R = inf) problem.
  std::optional<CurvatureRadius> radius;
  double omega = 0.0;
  int K = 1;
  /// Quadrature nodes override; 0 means oversampled default 2(2K'+1)+1
  /// with K' the bandwidth of the path being evaluated.
  int quadrature_nodes = 0;

  static Configuration hyperbolic(int n, double R, double omega, int K);
  static Configuration planar_problem(int n, double omega, int K);

  bool planar() const noexcept { return !radius.has_value(); }
  /// Throws std::logic_error for the planar problem.
  double R() const;
  /// Throws std::invalid_argument unless n >= 2 and K >= 1.
  void validate() const;
  int nodes_for(int bandwidth) const;
};

/// D_j <= this is treated as a collision.
inline constexpr double kCollisionDistance = 1e-13;

struct ActionEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
  std::optional<Eigen::MatrixXd> hessian;

  bool finite() const noexcept;
};

enum class Derivatives { none, gradient, hessian };

/// Evaluates the trapezoid-discretized action. Infeasible points (a node
/// outside the disk or two bodies closer than kCollisionDistance) give
/// value = +inf and empty derivatives.
ActionEvaluation evaluate_action(const Eigen::Ref<const Eigen::VectorXd>& vars,
                                 const Configuration& config, Derivatives order);

double action_value(const Eigen::Ref<const Eigen::VectorXd>& vars, const Configuration& config);
Eigen::VectorXd action_gradient(const Eigen::Ref<const Eigen::VectorXd>& vars,
                                const Configuration& config);
Eigen::MatrixXd action_hessian(const Eigen::Ref<const Eigen::VectorXd>& vars,
                               const Configuration& config);

/// Separations D_j(t) = d(q(t), q(t + 2 pi j / n)), j = 1..n-1, on the
/// quadrature grid (element j-1 of the result). In the planar problem this
/// is the Euclidean distance. Throws GeometryError on collision or when a
/// node leaves the disk.
std::vector<NodeValues> pairwise_separations(const TrigPath& path, const Configuration& config);

struct EnergySamples {
  std::vector<double> t;
  std::vector<double> kinetic;
  std::vector<double> potential;
};

/// Kinetic and cotangent potential energy of the lifted bodies
/// X_j(t) = R_omega(t) Q(t + 2 pi j / n) on the hyperboloid at M equispaced
/// times, computed from extrinsic coordinates.
EnergySamples hyperboloid_energies(const TrigPath& path, const Configuration& config, int M);

}  // namespace hypchoreo
