#include "hypchoreo/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hypchoreo {

CurvatureRadius::CurvatureRadius(double r) : r_(r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("curvature radius must be positive and finite");
  }
}

double lorentz_inner(const HyperboloidPoint& x, const HyperboloidPoint& y) {
  return x.x1 * y.x1 + x.x2 * y.x2 - x.x3 * y.x3;
}

double acosh1p(double u) {
  // acosh(1+u) = log1p(u + sqrt(u (2 + u)))
  return std::log1p(u + std::sqrt(u * (2.0 + u)));
}

double stable_asinh(double x) {
  const double ax = std::abs(x);
  // asinh(x) = log1p(x + x^2 / (1 + sqrt(1 + x^2)))
  const double r = std::log1p(ax + ax * ax / (1.0 + std::sqrt(1.0 + ax * ax)));
  return std::copysign(r, x);
}

double geodesic_hyperboloid(const HyperboloidPoint& x, const HyperboloidPoint& y,
                            CurvatureRadius R) {
  const double r2 = R.value() * R.value();
  // -X.Y/R^2 - 1 = (X-Y).(X-Y) / (2R^2) on the sheet; use the difference form
  // so nearby points do not lose all their digits.
  const HyperboloidPoint d{x.x1 - y.x1, x.x2 - y.x2, x.x3 - y.x3};
  const double arg = -lorentz_inner(x, y) / r2;
  if (arg < 1.0 - 1e-9) {
    std::ostringstream os;
    os << "points are not on the hyperboloid sheet (-X.Y/R^2 = " << arg << ")";
    throw GeometryError(GeometryError::Kind::invalid_geometry, os.str());
  }
  const double u = std::max(0.0, lorentz_inner(d, d) / (2.0 * r2));
  return R.value() * acosh1p(u);
}

DiskPoint project_to_disk(const HyperboloidPoint& x, CurvatureRadius R) {
  const double r = R.value();
  return DiskPoint{cplx(r * x.x1, r * x.x2) / (r + x.x3)};
}

void require_in_disk(cplx z, double R) {
  if (!(std::abs(z) <= R * (1.0 - kDiskMargin))) {
    std::ostringstream os;
    os << "point " << z << " is outside the Poincare disk of radius " << R;
    throw GeometryError(GeometryError::Kind::out_of_disk, os.str());
  }
}

HyperboloidPoint lift_to_hyperboloid(DiskPoint z, CurvatureRadius R) {
  const double r = R.value();
  require_in_disk(z.z, r);
  const double a2 = std::norm(z.z);
  const double s = r * r - a2;
  return HyperboloidPoint{2.0 * r * r * z.z.real() / s, 2.0 * r * r * z.z.imag() / s,
                          r * (r * r + a2) / s};
}

double disk_distance(DiskPoint z, DiskPoint xi, CurvatureRadius R) {
  const double r = R.value();
  require_in_disk(z.z, r);
  require_in_disk(xi.z, r);
  const double r2 = r * r;
  return 2.0 * r2 * std::abs(z.z - xi.z) /
         std::sqrt((r2 - std::norm(z.z)) * (r2 - std::norm(xi.z)));
}

double disk_geodesic(DiskPoint z, DiskPoint xi, CurvatureRadius R) {
  const double d = disk_distance(z, xi, R);
  return 2.0 * R.value() * stable_asinh(d / (2.0 * R.value()));
}

double conformal_factor(DiskPoint z, CurvatureRadius R) {
  const double r = R.value();
  require_in_disk(z.z, r);
  const double s = r * r - std::norm(z.z);
  return 4.0 * r * r * r * r / (s * s);
}

std::pair<TrigPath, CurvatureRadius> rescale_period(const TrigPath& path, double T,
                                                    CurvatureRadius R) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("period must be positive");
  const double lambda = T / (2.0 * std::numbers::pi);
  const double scale = std::pow(lambda, -2.0 / 3.0);
  return {scale * path, CurvatureRadius(scale * R.value())};
}

}  // namespace hypchoreo
