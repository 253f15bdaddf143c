#pragma once

// Lorentz hyperboloid and Poincare disk models of the hyperbolic plane of
// curvature -1/R^2, and the stereographic maps between them.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "hypchoreo/trigpath.hpp"

namespace hypchoreo {

using cplx = std::complex<double>;

class GeometryError : public std::runtime_error {
 public:
  enum class Kind { invalid_geometry, out_of_disk, collision };

  GeometryError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Radius R > 0 of the hyperbolic plane; the curvature is -1/R^2.
class CurvatureRadius {
 public:
  explicit CurvatureRadius(double r);
  double value() const noexcept { return r_; }
  double curvature() const noexcept { return -1.0 / (r_ * r_); }
  friend bool operator==(CurvatureRadius, CurvatureRadius) = default;

 private:
  double r_;
};

/// Extrinsic coordinates on the forward sheet x1^2 + x2^2 - x3^2 = -R^2, x3 > 0.
struct HyperboloidPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

/// Point of the Poincare disk |z| < R.
struct DiskPoint {
  cplx z;
};

/// Points with |z| > R (1 - kDiskMargin) are rejected as out of the disk.
inline constexpr double kDiskMargin = 1e-12;

double lorentz_inner(const HyperboloidPoint& x, const HyperboloidPoint& y);

/// R acosh(-X.Y / R^2). Throws GeometryError(invalid_geometry) when the
/// argument falls below 1 - 1e-9.
double geodesic_hyperboloid(const HyperboloidPoint& x, const HyperboloidPoint& y,
                            CurvatureRadius R);

DiskPoint project_to_disk(const HyperboloidPoint& x, CurvatureRadius R);
HyperboloidPoint lift_to_hyperboloid(DiskPoint z, CurvatureRadius R);

/// Image of the Lorentz distance: 2R^2 |z - xi| / sqrt((R^2-|z|^2)(R^2-|xi|^2)).
double disk_distance(DiskPoint z, DiskPoint xi, CurvatureRadius R);

/// 2R asinh(d / 2R) with d the disk distance.
double disk_geodesic(DiskPoint z, DiskPoint xi, CurvatureRadius R);

/// 4R^4 / (R^2 - |z|^2)^2.
double conformal_factor(DiskPoint z, CurvatureRadius R);

/// Throws GeometryError(out_of_disk) unless |z| <= R (1 - kDiskMargin).
void require_in_disk(cplx z, double R);

/// Maps a T-periodic orbit, given by its phase path p with Q(t) = p(2 pi t / T),
/// to the 2pi-periodic solution lambda^{-2/3} Q(lambda t), lambda = T / 2pi,
/// of the problem with radius R' = lambda^{-2/3} R.
std::pair<TrigPath, CurvatureRadius> rescale_period(const TrigPath& path, double T,
                                                    CurvatureRadius R);

// acosh(1 + u) and asinh(x) in forms that keep relative accuracy for
// u -> 0 and x -> 0.
double acosh1p(double u);
double stable_asinh(double x);

}  // namespace hypchoreo
