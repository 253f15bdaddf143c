#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hypchoreo/optimizer.hpp"
#include "hypchoreo/verify.hpp"
#include "support.hpp"

using namespace hypchoreo;

TEST_SUITE("verify") {

TEST_CASE("converged figure-eight passes") {
  const Choreography f8 = test::load("figure_eight.json");
  const Verification v = verify_all(f8, Thresholds{1e-12, 1e-10, 1e-10});
  CHECK(v.passed);
  CHECK(v.failure.empty());
  CHECK(v.residual <= 1e-11);
  CHECK(v.decay <= 1e-14);
  // outer 10% of the modes are far below the largest coefficient
  const int K = f8.path.bandwidth();
  double peak = 0.0, tail = 0.0;
  for (int k = -K; k <= K; ++k) {
    peak = std::max(peak, std::abs(f8.path[k]));
    if (std::abs(k) > 0.9 * K) tail = std::max(tail, std::abs(f8.path[k]));
  }
  CHECK(tail < 1e-8 * peak);
}

TEST_CASE("Phase 1 alone fails on the residual") {
  const Choreography seed = test::load("figure_eight_seed.json");
  const PhaseResult p1 = phase1_bfgs(pack(seed.path), seed.config, Phase1Options{});
  const Verification v = verify_all(unpack(p1.vars), seed.config, Thresholds{1e-12, 1e-10, 1e-10});
  CHECK_FALSE(v.passed);
  CHECK(v.residual > 1e-10);
  CHECK(v.failure.find("residual") != std::string::npos);
}

TEST_CASE("zero path reports a collision") {
  const Verification v = verify_all(TrigPath(5), Configuration::hyperbolic(3, 1.5, 0.0, 5), Thresholds{});
  CHECK_FALSE(v.passed);
  CHECK(v.failure.find("collide") != std::string::npos);
}

TEST_CASE("random non-solution has an O(1) residual") {
  const Configuration c = Configuration::hyperbolic(3, 1.5, 0.0, 8);
  const TrigPath p = random_seed(c, 3, 4);
  CHECK(motion_residual(p, c) > 1e-2);
}

TEST_CASE("residual diagnostics") {
  const Choreography f8 = test::load("figure_eight.json");
  const double coarse = motion_residual(f8);
  const double fine = motion_residual(f8.path, f8.config, 2 * f8.path.size() + 1);
  CHECK(fine <= 2.0 * coarse);
  CHECK(coarse <= 2.0 * fine);
  const double extrinsic = extrinsic_motion_residual(f8.path, f8.config);
  CHECK(extrinsic <= 10.0 * coarse);
  CHECK(coarse <= 10.0 * extrinsic);

  const ResidualTerms t = residual_terms(f8.path, f8.config);
  for (const auto& theta : t.Theta)
    for (double v : theta) CHECK(v > 0.0);
}

TEST_CASE("residual is invariant under rotation and time shift") {
  // on a smooth non-solution the residual is far above rounding and its
  // node norm is resolved on a fine grid
  const Configuration c = Configuration::hyperbolic(4, 2.0, 1.1, 10);
  TrigPath p(10);
  p[1] = 0.6;
  p[-2] = 0.08;
  p[3] = cplx(0.0, 0.03);
  const int N = 8 * p.size() + 1;
  const double r0 = motion_residual(p, c, N);
  CHECK(test::rel(motion_residual(rotate(p, 2.1), c, N), r0) < 1e-12);
  CHECK(test::rel(motion_residual(shift(p, 0.37), c, N), r0) < 1e-12);
}

TEST_CASE("truncated solution fails") {
  const Choreography f8 = test::load("figure_eight.json");
  const TrigPath half = truncate(f8.path, f8.path.bandwidth() / 4);
  const Verification v = verify_all(half, f8.config, Thresholds{});
  CHECK_FALSE(v.passed);
  CHECK(v.residual > 1e-8);
}

TEST_CASE("coefficient decay") {
  TrigPath p(3);
  p[1] = 0.5;
  CHECK(coefficient_decay(pad(p, 9)) == 0.0);
  p[-3] = cplx(0, -2e-3);
  CHECK(coefficient_decay(p) == doctest::Approx(2e-3));
}

}
