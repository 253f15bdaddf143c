#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "hypchoreo/trigpath.hpp"
#include "support.hpp"

using namespace hypchoreo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx direct_sum(const TrigPath& p, double t) {
  cplx s{};
  for (int k = -p.bandwidth(); k <= p.bandwidth(); ++k) s += p[k] * std::polar(1.0, k * t);
  return s;
}

}  // namespace

TEST_SUITE("trigpath") {

TEST_CASE("evaluation at nodes") {
  TrigPath c(2);
  c[0] = 1.0;
  for (const cplx& v : eval_at_nodes(c, 7).values) CHECK(std::abs(v - 1.0) < 1e-15);

  TrigPath e(1);
  e[1] = 1.0;
  const NodeValues v = eval_at_nodes(e, 5);
  for (int m = 0; m < 5; ++m) CHECK(std::abs(v.values[m] - std::polar(1.0, kTwoPi * m / 5)) < 1e-15);

  std::mt19937_64 rng(1);
  const TrigPath p = test::random_path(rng, 12, 12, 1.0);
  for (int N : {25, 26, 64, 101}) {
    const NodeValues w = eval_at_nodes(p, N);
    double worst = 0.0;
    for (int m = 0; m < N; ++m) worst = std::max(worst, std::abs(w.values[m] - direct_sum(p, w.node(m))));
    CHECK(worst < 1e-13);
  }
  CHECK_THROWS_AS(eval_at_nodes(p, 24), std::invalid_argument);
}

TEST_CASE("interpolation from samples") {
  const TrigPath one = from_samples(NodeValues(std::vector<cplx>(9, 1.0)));
  CHECK(one.bandwidth() == 4);
  CHECK(std::abs(one[0] - 1.0) < 1e-15);
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(one[k]) + std::abs(one[-k]) < 1e-15);

  std::vector<cplx> e(7);
  for (int m = 0; m < 7; ++m) e[m] = std::polar(1.0, kTwoPi * m / 7);
  const TrigPath mode = from_samples(NodeValues(e));
  CHECK(std::abs(mode[1] - 1.0) < 1e-15);
  CHECK(std::abs(mode[0]) < 1e-15);

  std::mt19937_64 rng(2);
  const TrigPath p = test::random_path(rng, 20, 20, 1.0);
  CHECK(test::max_abs(from_samples(eval_at_nodes(p, 41)), p) < 1e-13);
  CHECK_THROWS_AS(from_samples(NodeValues(std::vector<cplx>(8, 1.0))), std::invalid_argument);
}

TEST_CASE("derivative and shift") {
  TrigPath c(2);
  c[0] = 3.0;
  CHECK(test::max_abs(derivative(c), TrigPath(2)) == 0.0);
  TrigPath e(2);
  e[1] = 1.0;
  CHECK(std::abs(derivative(e)[1] - cplx(0, 1)) == 0.0);
  TrigPath f(2);
  f[2] = 1.0;
  CHECK(std::abs(derivative(derivative(f))[2] + 4.0) < 1e-15);

  std::mt19937_64 rng(3);
  const TrigPath p = test::random_path(rng, 10, 10, 1.0);
  CHECK(test::max_abs(shift(p, kTwoPi), p) < 1e-14);
  CHECK(test::max_abs(shift(p, 0.0), p) == 0.0);
  CHECK(test::max_abs(shift(shift(p, 0.4), 1.1), shift(p, 1.5)) < 1e-14);
  CHECK(test::max_abs(derivative(shift(p, 0.7)), shift(derivative(p), 0.7)) < 1e-14);
  for (double t : {0.0, 0.3, 2.0, 5.9}) {
    CHECK(std::abs(shift(p, 0.25)(t) - p(t + 0.25)) < 1e-13);
    CHECK(std::abs(derivative(p)(t) - p.derivative_at(t)) < 1e-13);
  }
}

TEST_CASE("padding, truncation and packing") {
  std::mt19937_64 rng(4);
  const TrigPath p = test::random_path(rng, 6, 6, 1.0);
  CHECK(pad(p, 6) == p);
  const TrigPath q = pad(p, 15);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    CHECK(std::abs(q(t) - p(t)) < 1e-13);
  }
  CHECK(truncate(q, 6) == p);
  CHECK_THROWS_AS(pad(p, 5), std::invalid_argument);
  CHECK(unpack(pack(p)) == p);
  const Eigen::VectorXd v = pack(p);
  CHECK(v.size() == 2 * 13);
  CHECK(v[0] == p[-6].real());
  CHECK(v[13] == p[-6].imag());
}

TEST_CASE("trapezoid rule") {
  CHECK(std::abs(trapezoid_integral(NodeValues(std::vector<cplx>(5, 1.0))) - kTwoPi) < 1e-14);
  TrigPath e(1);
  e[1] = 1.0;
  CHECK(std::abs(trapezoid_integral(eval_at_nodes(e, 3))) < 1e-15);

  std::mt19937_64 rng(5);
  const TrigPath p = test::random_path(rng, 8, 8, 1.0);
  for (int N : {17, 30}) {
    const NodeValues w = eval_at_nodes(p, N);
    std::vector<cplx> sq(static_cast<std::size_t>(N));
    for (int m = 0; m < N; ++m) sq[m] = std::norm(w.values[m]);
    // Parseval holds exactly once N exceeds the bandwidth 16 of |q|^2.
    double energy = 0.0;
    for (const cplx& c : p.coeffs()) energy += std::norm(c);
    CHECK(test::rel(trapezoid_integral(NodeValues(sq)).real(), kTwoPi * energy) < 1e-12);
  }

  // oracle: adaptive Gauss-Kronrod on a smooth non-band-limited integrand
  auto f = [](double t) { return std::exp(std::cos(t)) * (1.0 + 0.5 * std::sin(2 * t)); };
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, kTwoPi, 15, 1e-15);
  std::vector<cplx> s(41);
  for (int m = 0; m < 41; ++m) s[m] = f(kTwoPi * m / 41);
  CHECK(test::rel(trapezoid_integral(NodeValues(s)).real(), oracle) < 1e-12);
}

}
