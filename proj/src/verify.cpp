#include "hypchoreo/verify.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hypchoreo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> nodes_of(const TrigPath& path, const NodeGrid& grid) {
  std::vector<cplx> v(static_cast<std::size_t>(grid.size()));
  grid.synthesize(path.coeffs(), v);
  return v;
}

int default_nodes(const TrigPath& path, int N) {
  if (N == 0) return path.size();
  if (N < path.size()) throw std::invalid_argument("verification grid is undersampled");
  return N;
}

// Body 0 and the others at the grid nodes, in the rotating frame.
struct BodySamples {
  std::vector<cplx> z, dz, ddz;
  std::vector<std::vector<cplx>> others;  // [i-1][node]
};

BodySamples body_samples(const TrigPath& path, const Configuration& config, const NodeGrid& grid) {
  BodySamples s;
  const TrigPath d1 = derivative(path);
  s.z = nodes_of(path, grid);
  s.dz = nodes_of(d1, grid);
  s.ddz = nodes_of(derivative(d1), grid);
  for (int i = 1; i < config.n; ++i) {
    s.others.push_back(nodes_of(shift(path, kTwoPi * i / config.n), grid));
  }
  return s;
}

using Vec3 = std::array<double, 3>;

double lorentz(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; }

}  // namespace

const PhaseReport* SolveReport::final_phase() const noexcept {
  if (phase2) return &*phase2;
  if (phase1) return &*phase1;
  return nullptr;
}

ResidualTerms residual_terms(const TrigPath& path, const Configuration& config, int N) {
  const double R = config.R();
  const double R2 = R * R;
  const NodeGrid grid(default_nodes(path, N));
  const int M = grid.size();
  const auto z = nodes_of(path, grid);
  ResidualTerms terms;
  terms.lambda.resize(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    require_in_disk(z[static_cast<std::size_t>(m)], R);
    const double s = R2 - std::norm(z[static_cast<std::size_t>(m)]);
    terms.lambda[static_cast<std::size_t>(m)] = 4.0 * R2 * R2 / (s * s);
  }
  for (int i = 1; i < config.n; ++i) {
    const auto zi = nodes_of(shift(path, kTwoPi * i / config.n), grid);
    std::vector<cplx> P(static_cast<std::size_t>(M));
    std::vector<double> Theta(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      const cplx zj = z[mi];
      const cplx zo = zi[mi];
      require_in_disk(zo, R);
      const double sj = R2 - std::norm(zj);
      const double so = R2 - std::norm(zo);
      P[mi] = sj * so * so * (R2 - std::conj(zo) * zj) * (zo - zj);
      const double first = 4.0 * R2 * (zj * std::conj(zo)).real() -
                           (std::norm(zj) + R2) * (std::norm(zo) + R2);
      Theta[mi] = first * first - sj * sj * so * so;
    }
    terms.P.push_back(std::move(P));
    terms.Theta.push_back(std::move(Theta));
  }
  return terms;
}

double motion_residual(const TrigPath& path, const Configuration& config, int N) {
  const NodeGrid grid(default_nodes(path, N));
  const int M = grid.size();
  const BodySamples s = body_samples(path, config, grid);
  const cplx iw(0.0, config.omega);
  const double w2 = config.omega * config.omega;

  std::optional<ResidualTerms> terms;
  if (!config.planar()) terms = residual_terms(path, config, M);

  double res2 = 0.0;
  double acc2 = 0.0;
  for (int m = 0; m < M; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    const cplx z = s.z[mi];
    const cplx v = s.dz[mi] + iw * z;
    // inertial acceleration expressed in the rotating frame
    const cplx acc = s.ddz[mi] + 2.0 * iw * s.dz[mi] - w2 * z;
    cplx rhs{};
    if (config.planar()) {
      for (const auto& other : s.others) {
        const cplx d = other[mi] - z;
        const double r = std::abs(d);
        if (!(r > kCollisionDistance)) {
          throw GeometryError(GeometryError::Kind::collision, "bodies collide");
        }
        rhs += d / (r * r * r);
      }
    } else {
      const double R = config.R();
      const double R2 = R * R;
      rhs = -2.0 * std::conj(z) * v * v / (R2 - std::norm(z));
      cplx sum{};
      for (std::size_t i = 0; i < terms->P.size(); ++i) {
        const double theta = terms->Theta[i][mi];
        if (!(theta > 0.0)) {
          throw GeometryError(GeometryError::Kind::collision,
                              "Theta vanishes: bodies collide at t = " +
                                  std::to_string(grid.node(m)));
        }
        sum += terms->P[i][mi] / std::pow(theta, 1.5);
      }
      rhs += 4.0 * R / terms->lambda[mi] * sum;
    }
    res2 += std::norm(acc - rhs);
    acc2 += std::norm(acc);
  }
  return std::sqrt(res2 / acc2);
}

double motion_residual(const Choreography& choreo) {
  return motion_residual(choreo.path, choreo.config);
}

double extrinsic_motion_residual(const TrigPath& path, const Configuration& config, int N) {
  const double R = CurvatureRadius(config.R()).value();
  const double R2 = R * R;
  const NodeGrid grid(default_nodes(path, N));
  const int M = grid.size();
  const int n = config.n;
  const double w = config.omega;

  // Extrinsic position, velocity and acceleration of every body, from the
  // inverse stereographic map differentiated along z(t).
  // [body][order][coordinate][node]
  std::vector<std::array<std::array<std::vector<double>, 3>, 3>> S(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const TrigPath p = shift(path, kTwoPi * j / n);
    const TrigPath dp = derivative(p);
    const auto z = nodes_of(p, grid);
    const auto dz = nodes_of(dp, grid);
    const auto ddz = nodes_of(derivative(dp), grid);
    auto& body = S[static_cast<std::size_t>(j)];
    for (auto& order : body) {
      for (auto& c : order) c.resize(static_cast<std::size_t>(M));
    }
    for (int m = 0; m < M; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      require_in_disk(z[mi], R);
      const double s = R2 - std::norm(z[mi]);
      const double ds = -2.0 * (std::conj(z[mi]) * dz[mi]).real();
      const double dds = -2.0 * (std::norm(dz[mi]) + (std::conj(z[mi]) * ddz[mi]).real());
      // x1 + i x2 = 2R^2 z / s, x3 = 2R^3 / s - R
      const cplx W = 2.0 * R2 * z[mi] / s;
      const cplx dW = 2.0 * R2 * (dz[mi] / s - z[mi] * ds / (s * s));
      const cplx ddW = 2.0 * R2 *
                       (ddz[mi] / s - 2.0 * dz[mi] * ds / (s * s) - z[mi] * dds / (s * s) +
                        2.0 * z[mi] * ds * ds / (s * s * s));
      const double X3 = 2.0 * R2 * R / s - R;
      const double dX3 = -2.0 * R2 * R * ds / (s * s);
      const double ddX3 = -2.0 * R2 * R * (dds / (s * s) - 2.0 * ds * ds / (s * s * s));
      const std::array<cplx, 3> planar{W, dW, ddW};
      const std::array<double, 3> vertical{X3, dX3, ddX3};
      for (std::size_t o = 0; o < 3; ++o) {
        body[o][0][mi] = planar[o].real();
        body[o][1][mi] = planar[o].imag();
        body[o][2][mi] = vertical[o];
      }
    }
  }

  double res2 = 0.0;
  double acc2 = 0.0;
  for (int m = 0; m < M; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    auto at = [&](int j, std::size_t order) {
      const auto& b = S[static_cast<std::size_t>(j)][order];
      return Vec3{b[0][mi], b[1][mi], b[2][mi]};
    };
    const Vec3 X = at(0, 0), dX = at(0, 1), ddX = at(0, 2);
    // rotating frame: Omega Y = w (-y2, y1, 0)
    const Vec3 vel{dX[0] - w * X[1], dX[1] + w * X[0], dX[2]};
    const Vec3 acc{ddX[0] - 2.0 * w * dX[1] - w * w * X[0],
                   ddX[1] + 2.0 * w * dX[0] - w * w * X[1], ddX[2]};
    Vec3 res = acc;
    for (int i = 1; i < n; ++i) {
      const Vec3 Xi = at(i, 0);
      const double ij = lorentz(Xi, X);
      const double den = std::pow(ij * ij - R2 * R2, 1.5);
      for (std::size_t c = 0; c < 3; ++c) res[c] -= (R2 * R * Xi[c] + R * ij * X[c]) / den;
    }
    const double vv = lorentz(vel, vel);
    for (std::size_t c = 0; c < 3; ++c) {
      res[c] -= vv / R2 * X[c];
      res2 += res[c] * res[c];
      acc2 += acc[c] * acc[c];
    }
  }
  return std::sqrt(res2 / acc2);
}

double coefficient_decay(const TrigPath& path) {
  const int K = path.bandwidth();
  return std::max(std::abs(path[-K]), std::abs(path[K]));
}

double relative_gradient_norm(const Eigen::VectorXd& gradient, const Eigen::VectorXd& vars) {
  const double vn = vars.norm();
  return vn > 0.0 ? gradient.norm() / vn : gradient.norm();
}

Verification verify_all(const TrigPath& path, const Configuration& config,
                        const Thresholds& thresholds) {
  Verification v;
  v.decay = coefficient_decay(path);
  try {
    const Eigen::VectorXd vars = pack(path);
    const auto eval = evaluate_action(vars, config, Derivatives::gradient);
    if (!eval.finite()) {
      // surface the geometric reason
      pairwise_separations(path, config);
      throw GeometryError(GeometryError::Kind::collision, "action is not finite");
    }
    v.gradient = relative_gradient_norm(eval.gradient, vars);
    v.residual = motion_residual(path, config);
  } catch (const GeometryError& e) {
    v.passed = false;
    v.failure = e.what();
    return v;
  }
  auto flag = [&v](const char* what) {
    if (!v.failure.empty()) v.failure += "; ";
    v.failure += what;
  };
  if (!(v.decay <= thresholds.decay)) flag("coefficient decay above threshold");
  if (!(v.gradient <= thresholds.gradient)) flag("gradient norm above threshold");
  if (!(v.residual <= thresholds.residual)) flag("equation-of-motion residual above threshold");
  v.passed = v.failure.empty();
  return v;
}

Verification verify_all(const Choreography& choreo, const Thresholds& thresholds) {
  return verify_all(choreo.path, choreo.config, thresholds);
}

}  // namespace hypchoreo
