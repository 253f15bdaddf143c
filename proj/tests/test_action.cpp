#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "hypchoreo/action.hpp"
#include "hypchoreo/optimizer.hpp"
#include "support.hpp"

using namespace hypchoreo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Configuration> derivative_configs() {
  return {Configuration::hyperbolic(3, 1.5, 0.0, 6), Configuration::hyperbolic(4, 2.0, 1.3, 5),
          Configuration::planar_problem(3, 0.4, 5)};
}

Eigen::VectorXd fd_gradient(const Eigen::VectorXd& x, const Configuration& c, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (action_value(p, c) - action_value(m, c)) / (2 * h);
  }
  return g;
}

Eigen::MatrixXd fd_hessian(const Eigen::VectorXd& x, const Configuration& c, double h) {
  Eigen::MatrixXd H(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, m = x;
    p[i] += h;
    m[i] -= h;
    H.col(i) = (action_gradient(p, c) - action_gradient(m, c)) / (2 * h);
  }
  return H;
}

}  // namespace

TEST_SUITE("action") {

TEST_CASE("separations of a rotating pair") {
  const double R = 1.7, r = 0.6;
  const Configuration c = Configuration::hyperbolic(2, R, 0.0, 3);
  TrigPath p(3);
  p[1] = r;
  const auto D = pairwise_separations(p, c);
  REQUIRE(D.size() == 1);
  const double expected = 2 * R * R * 2 * r / (R * R - r * r);
  for (const cplx& d : D[0].values) CHECK(test::rel(d.real(), expected) < 1e-14);

  TrigPath still(3);
  still[0] = 0.2;
  CHECK_THROWS_AS(pairwise_separations(still, c), GeometryError);
  TrigPath outside(3);
  outside[1] = 1.8;
  CHECK_THROWS_AS(pairwise_separations(outside, c), GeometryError);
}

TEST_CASE("separations are symmetric under j -> n - j") {
  const Configuration c = Configuration::hyperbolic(5, 1.2, 0.0, 8);
  const TrigPath p = random_seed(c, 3, 9);
  const auto D = pairwise_separations(p, c);
  const int M = D[0].size();
  REQUIRE(M % 5 == 0);
  for (int j = 1; j < 5; ++j) {
    const int lag = M * j / 5;
    for (int m = 0; m < M; ++m) {
      CHECK(test::rel(D[j - 1].values[m].real(), D[4 - j].values[(m + lag) % M].real()) < 1e-12);
    }
  }
}

TEST_CASE("relative formula with omega = 0 is the absolute one") {
  Configuration c = Configuration::hyperbolic(3, 1.5, 0.0, 6);
  const Eigen::VectorXd x = pack(random_seed(c, 3, 1));
  Configuration r = c;
  r.omega = -0.0;
  CHECK(action_value(x, c) == action_value(x, r));
  CHECK(action_value(x, c) > 0.0);
}

TEST_CASE("gradient and Hessian match finite differences") {
  for (const Configuration& c : derivative_configs()) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      CAPTURE(c.n);
      CAPTURE(s);
      const Eigen::VectorXd x = pack(random_seed(c, 3, 100 + s));
      const ActionEvaluation e = evaluate_action(x, c, Derivatives::hessian);
      REQUIRE(e.finite());
      const Eigen::VectorXd g_fd = fd_gradient(x, c, 1e-6);
      CHECK((e.gradient - g_fd).norm() / e.gradient.norm() < 1e-6);
      const Eigen::MatrixXd& H = *e.hessian;
      CHECK((H - H.transpose()).norm() / H.norm() <= 1e-12);
      CHECK((H - fd_hessian(x, c, 1e-6)).norm() / H.norm() < 1e-5);
      CHECK(e.value == action_value(x, c));
    }
  }
}

TEST_CASE("infeasible points give a non-finite value") {
  const Configuration c = Configuration::hyperbolic(3, 1.0, 0.0, 3);
  TrigPath p(3);
  p[1] = 1.5;
  const ActionEvaluation e = evaluate_action(pack(p), c, Derivatives::gradient);
  CHECK_FALSE(e.finite());
  CHECK(e.gradient.size() == 0);
  CHECK_THROWS_AS(action_gradient(pack(p), c), GeometryError);
  CHECK_FALSE(std::isfinite(action_value(pack(TrigPath(3)), c)));
}

TEST_CASE("rotation, time shift and padding invariance") {
  // exact for resolved integrands, so checked on converged orbits
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (const char* name : {"figure_eight.json", "five_body_b.json", "relative_b.json", "figure_eight_planar.json"}) {
    CAPTURE(name);
    const Choreography ch = test::load(name);
    const TrigPath& p = ch.path;
    const int K = p.bandwidth();
    const Configuration& c = ch.config;
    const ActionEvaluation e = evaluate_action(pack(p), c, Derivatives::gradient);
    const double theta = u(rng), s = u(rng);
    CHECK(test::rel(action_value(pack(rotate(p, theta)), c), e.value) < 1e-12);
    CHECK(test::rel(action_value(pack(shift(p, s)), c), e.value) < 1e-12);
    // away from solutions the derivative along d/dtheta [e^{i theta} q] still vanishes
    const TrigPath q = random_seed(c, 3, 2);
    const Eigen::VectorXd gq = action_gradient(pack(q), c);
    const Eigen::VectorXd dir = pack(cplx(0, 1) * q);
    CHECK(std::abs(gq.dot(dir)) / (gq.norm() * dir.norm()) < 1e-12);

    const int K2 = K + 10;
    const ActionEvaluation f = evaluate_action(pack(pad(p, K2)), c, Derivatives::gradient);
    CHECK(test::rel(f.value, e.value) < 1e-13);
    const int n1 = 2 * K + 1, n2 = 2 * K2 + 1;
    Eigen::VectorXd restricted(2 * n1);
    restricted << f.gradient.segment(10, n1), f.gradient.segment(n2 + 10, n1);
    // the gradient vanishes at a solution; compare on the scale of the variables
    CHECK((restricted - e.gradient).norm() / pack(p).norm() < 1e-12);
  }
}

TEST_CASE("large R approaches the planar action of the doubled path") {
  const Configuration planar = Configuration::planar_problem(3, 0.0, 8);
  const TrigPath p = random_seed(planar, 3, 2);
  const double Ap = action_value(pack(2.0 * p), planar);
  double err[2];
  int i = 0;
  for (double R : {1e3, 1e4}) {
    err[i++] = test::rel(action_value(pack(p), Configuration::hyperbolic(3, R, 0.0, 8)), Ap);
  }
  CHECK(err[0] < 1e-5);
  CHECK(err[0] / err[1] == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("figure-eight action") {
  const Choreography f8 = test::load("figure_eight.json");
  CHECK(test::rel(action_value(pack(f8.path), f8.config), 27.840867421590929) < 1e-10);
}

TEST_CASE("Hessian at the figure-eight has the gauge null space") {
  const Choreography f8 = test::load("figure_eight.json");
  Configuration c = f8.config;
  c.K = f8.path.bandwidth();
  const Eigen::MatrixXd H = action_hessian(pack(f8.path), c);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  CHECK(ev.minCoeff() >= -1e-8 * scale);
  int near_zero = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) near_zero += std::abs(ev[i]) < 1e-8 * scale;
  CHECK(near_zero >= 2);
}

TEST_CASE("hyperboloid energies") {
  TrigPath circle(2);
  circle[1] = 0.5;
  const EnergySamples e = hyperboloid_energies(circle, Configuration::hyperbolic(2, 1.0, 0.0, 2), 32);
  for (std::size_t m = 0; m < e.t.size(); ++m) {
    CHECK(test::rel(e.kinetic[m], e.kinetic[0]) < 1e-12);
    CHECK(e.potential[m] < 0.0);
  }

  const Choreography f8 = test::load("figure_eight.json");
  const int M = 4 * f8.path.size() + 1;
  const EnergySamples g = hyperboloid_energies(f8.path, f8.config, M);
  double lagrangian = 0.0;
  for (std::size_t m = 0; m < g.t.size(); ++m) {
    lagrangian += g.kinetic[m] - g.potential[m];
    CHECK(g.potential[m] < 0.0);
  }
  lagrangian *= kTwoPi / M;
  CHECK(test::rel(lagrangian, action_value(pack(f8.path), f8.config)) < 1e-10);
}

}
