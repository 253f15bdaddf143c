#include "hypchoreo/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace hypchoreo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Alignment search windows around the L2-optimal rotation (radians) and
// shift (in units of the node spacing 2 pi / N).
constexpr double kThetaWindow = 0.05;
constexpr double kShiftWindow = 0.5;
// Grid maxima within this relative band of the largest are refined.
constexpr double kPeakBand = 0.05;
// Bracket width at which golden_minimize stops.
constexpr double kAlignTolerance = 1e-13;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

// Solves at radius R from a nearby path. Newton alone first; if that does
// not pass verification, both phases.
Choreography solve_member(const Configuration& cfg, const TrigPath& start,
                          const ContinuationOptions& opts) {
  Phase2Options o2 = opts.phase2;
  o2.K2 = cfg.K;
  try {
    Choreography c = refine(cfg, start, o2);
    if (c.report.ok() && verify_all(c, opts.thresholds).passed) return c;
  } catch (const GeometryError&) {
  }
  return solve(cfg, start, opts.phase1, o2);
}

// Golden-section search on [lo, hi]. Unlike Brent's method it resolves the
// kinked minima of max-type functions down to kAlignTolerance.
template <class F>
std::pair<double, double> golden_minimize(F&& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > kAlignTolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

TrigPath centered(const TrigPath& path, const Configuration& config) {
  const int K = path.bandwidth();
  const int M = 10 * (2 * K + 1) + 1;
  NodeValues z = eval_at_nodes(path, M);
  if (config.planar()) {
    const cplx c0 = path[0];
    for (auto& v : z.values) v -= c0;
    return truncate(from_samples(z), K);
  }
  const CurvatureRadius R(config.R());
  const double r = R.value();
  HyperboloidPoint c{0.0, 0.0, 0.0};
  for (const auto& v : z.values) {
    const HyperboloidPoint X = lift_to_hyperboloid(DiskPoint{v}, R);
    c.x1 += X.x1;
    c.x2 += X.x2;
    c.x3 += X.x3;
  }
  // normalize the timelike mean back onto the hyperboloid
  const double scale = r / std::sqrt(-lorentz_inner(c, c));
  const cplx a = project_to_disk(HyperboloidPoint{c.x1 * scale, c.x2 * scale, c.x3 * scale}, R).z;
  const double r2 = r * r;
  for (auto& v : z.values) v = r2 * (v - a) / (r2 - std::conj(a) * v);
  return truncate(from_samples(z), K);
}

Choreography solve_planar(const Configuration& config, const TrigPath& seed,
                          const Phase1Options& opts1, const Phase2Options& opts2) {
  if (!config.planar()) throw std::invalid_argument("solve_planar needs a planar configuration");
  return solve(config, seed, opts1, opts2);
}

FamilySweep continue_in_R(const Choreography& planar_start, const std::vector<double>& R_list,
                          const ContinuationOptions& opts) {
  if (!planar_start.config.planar()) {
    throw std::invalid_argument("continuation starts from a planar choreography");
  }
  for (std::size_t i = 1; i < R_list.size(); ++i) {
    if (!(R_list[i] < R_list[i - 1])) throw std::invalid_argument("R list must be descending");
  }
  FamilySweep sweep;
  const int K = planar_start.path.bandwidth();
  TrigPath start = 0.5 * planar_start.path;
  for (double r : R_list) {
    const CurvatureRadius R(r);
    const Configuration cfg =
        Configuration::hyperbolic(planar_start.config.n, r, planar_start.config.omega, K);
    Choreography c;
    try {
      c = solve_member(cfg, start, opts);
    } catch (const GeometryError& e) {
      sweep.failure = "R = " + format_double(r) + ": " + e.what();
      break;
    }
    const Verification v = verify_all(c, opts.thresholds);
    if (!c.report.ok() || !v.passed) {
      sweep.failure = "R = " + format_double(r) + ": " +
                      (c.report.ok() ? v.failure : c.report.failure);
      break;
    }
    const double diff = planar_limit_diff(c, planar_start);
    start = c.path;
    sweep.members.push_back(FamilyMember{R, std::move(c), diff});
  }
  return sweep;
}

Choreography planar_counterpart(const Choreography& hyperbolic, double max_R,
                                const ContinuationOptions& opts) {
  if (hyperbolic.config.planar()) return hyperbolic;
  const Configuration& base = hyperbolic.config;
  const int K = hyperbolic.path.bandwidth();
  double R = base.R();
  TrigPath path = hyperbolic.path;
  double factor = 1.5;
  Choreography fail;
  fail.config = base;
  fail.path = path;
  while (R < max_R) {
    const double next = std::min(max_R, R * (R < 10.0 ? factor : 2.0 * factor));
    const Configuration cfg = Configuration::hyperbolic(base.n, next, base.omega, K);
    Choreography c;
    bool ok = false;
    try {
      c = solve_member(cfg, path, opts);
      ok = c.report.ok() && verify_all(c, opts.thresholds).passed;
    } catch (const GeometryError&) {
    }
    if (!ok) {
      factor = 1.0 + 0.5 * (factor - 1.0);
      if (factor < 1.01) {
        fail.report.failure = "continuation stalled at R = " + format_double(R);
        return fail;
      }
      continue;
    }
    R = next;
    path = c.path;
  }
  const Configuration planar = Configuration::planar_problem(base.n, base.omega, K);
  try {
    return solve_member(planar, 2.0 * path, opts);
  } catch (const GeometryError& e) {
    fail.report.failure = std::string("planar solve failed: ") + e.what();
    return fail;
  }
}

double planar_limit_diff(const Choreography& hyperbolic, const Choreography& planar) {
  if (hyperbolic.config.n != planar.config.n) {
    throw std::invalid_argument("choreographies have different body counts");
  }
  if (!planar.config.planar()) throw std::invalid_argument("second choreography must be planar");
  const double scale = hyperbolic.config.planar() ? 1.0 : 2.0;
  const int K = std::max(hyperbolic.path.bandwidth(), planar.path.bandwidth());
  // In a rotating frame the rotation axis fixes the origin.
  const bool absolute = hyperbolic.config.omega == 0.0 && planar.config.omega == 0.0;
  const TrigPath a = scale * (absolute ? centered(pad(hyperbolic.path, K), hyperbolic.config)
                                       : pad(hyperbolic.path, K));
  const TrigPath b = absolute ? centered(pad(planar.path, K), planar.config) : pad(planar.path, K);
  const int N = 2 * K + 1;
  const NodeGrid grid(10 * N);
  const int M = grid.size();
  const double h = kTwoPi / M;

  std::vector<cplx> bvals(static_cast<std::size_t>(M));
  grid.synthesize(b.coeffs(), bvals);

  // L2-optimal rotation for shift s is minus the phase of this correlation.
  auto correlation = [&](double s) {
    cplx c{};
    for (int k = -K; k <= K; ++k) c += a[k] * std::polar(1.0, k * s) * std::conj(b[k]);
    return c;
  };

  TrigPath shifted(K);
  std::vector<cplx> avals(static_cast<std::size_t>(M));
  std::vector<double> dev(static_cast<std::size_t>(M));
  // sup_t |e^{i theta} a(t + s) - b(t)| for the shift loaded in shifted/avals:
  // grid maxima near the top are refined off the grid.
  auto sup_norm = [&](double theta) {
    const cplx rot = std::polar(1.0, theta);
    double top = 0.0;
    for (int m = 0; m < M; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      dev[mi] = std::abs(rot * avals[mi] - bvals[mi]);
      top = std::max(top, dev[mi]);
    }
    double worst = top;
    for (int m = 0; m < M; ++m) {
      const double v = dev[static_cast<std::size_t>(m)];
      if (v < (1.0 - kPeakBand) * top || v < dev[static_cast<std::size_t>((m + M - 1) % M)] ||
          v < dev[static_cast<std::size_t>((m + 1) % M)]) {
        continue;
      }
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::brent_find_minima(
          [&](double t) { return -std::abs(rot * shifted(t) - b(t)); }, grid.node(m) - h,
          grid.node(m) + h, std::numeric_limits<double>::digits / 2, iters);
      worst = std::max(worst, -r.second);
    }
    return worst;
  };
  auto best_over_theta = [&](double s) {
    for (int k = -K; k <= K; ++k) shifted[k] = a[k] * std::polar(1.0, k * s);
    grid.synthesize(shifted.coeffs(), avals);
    const double theta0 = -std::arg(correlation(s));
    return golden_minimize(sup_norm, theta0 - kThetaWindow, theta0 + kThetaWindow).second;
  };

  // L2 alignment on a fine shift grid, refined, then the sup norm around it
  const int S = 64 * N;
  double s0 = 0.0;
  double best = -1.0;
  for (int i = 0; i < S; ++i) {
    const double s = kTwoPi * i / S;
    const double c = std::abs(correlation(s));
    if (c > best) {
      best = c;
      s0 = s;
    }
  }
  std::uintmax_t iters = 100;
  s0 = boost::math::tools::brent_find_minima([&](double s) { return -std::abs(correlation(s)); },
                                             s0 - kTwoPi / S, s0 + kTwoPi / S,
                                             std::numeric_limits<double>::digits / 2, iters)
           .first;
  const double ws = kShiftWindow * kTwoPi / N;
  return golden_minimize(best_over_theta, s0 - ws, s0 + ws).second;
}

double convergence_rate(const std::vector<FamilyMember>& members) {
  if (members.size() < 3) throw std::invalid_argument("convergence rate needs at least 3 members");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& m : members) {
    if (!(m.diff_to_planar > 0.0)) throw std::invalid_argument("differences must be positive");
    const double x = std::log(m.R.value());
    const double y = std::log(m.diff_to_planar);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(members.size());
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw std::invalid_argument("convergence rate needs distinct radii");
  return (n * sxy - sx * sy) / den;
}

std::string sweep_csv(const std::string& family, const std::vector<FamilyMember>& members) {
  std::string slope;
  if (members.size() >= 3) slope = format_double(convergence_rate(members));
  std::string out = "family,R,diff,slope\n";
  for (const auto& m : members) {
    out += family + "," + format_double(m.R.value()) + "," + format_double(m.diff_to_planar) +
           "," + slope + "\n";
  }
  return out;
}

}  // namespace hypchoreo
