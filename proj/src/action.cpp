#include "hypchoreo/action.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypchoreo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The quadrature sums run in extended precision: at a converged solution the
// gradient is dominated by rounding of the nodal terms, amplified by the mode
// number, and double precision would put its floor near 1e-12.
using real = long double;
using xcplx = std::complex<real>;
constexpr real kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

// Second-order Wirtinger jet of a function of two complex arguments x, y.
// Slots: 0 = x, 1 = conj(x), 2 = y, 3 = conj(y).
struct Jet {
  xcplx v{};
  std::array<xcplx, 4> d{};
  std::array<std::array<xcplx, 4>, 4> dd{};
};

Jet variable(xcplx value, int slot) {
  Jet j;
  j.v = value;
  j.d[static_cast<std::size_t>(slot)] = 1.0;
  return j;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v - b.v;
  for (std::size_t i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] - b.d[i];
    for (std::size_t k = 0; k < 4; ++k) r.dd[i][k] = a.dd[i][k] - b.dd[i][k];
  }
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  for (std::size_t i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (std::size_t k = 0; k < 4; ++k) {
      r.dd[i][k] = a.dd[i][k] * b.v + a.d[i] * b.d[k] + a.d[k] * b.d[i] + a.v * b.dd[i][k];
    }
  }
  return r;
}

Jet operator*(real s, Jet a) {
  a.v *= s;
  for (std::size_t i = 0; i < 4; ++i) {
    a.d[i] *= s;
    for (std::size_t k = 0; k < 4; ++k) a.dd[i][k] *= s;
  }
  return a;
}

// phi(a) for a real-valued jet a, given phi, phi', phi'' at a.v.
Jet compose(const Jet& a, real f0, real f1, real f2) {
  Jet r;
  r.v = f0;
  for (std::size_t i = 0; i < 4; ++i) {
    r.d[i] = f1 * a.d[i];
    for (std::size_t k = 0; k < 4; ++k) r.dd[i][k] = f2 * a.d[i] * a.d[k] + f1 * a.dd[i][k];
  }
  return r;
}

// 1 / (R^2 - z conj z) in slots (s, s+1).
Jet inverse_gap(const Jet& z, const Jet& zbar, real R2) {
  const Jet a = z * zbar;
  const real u = R2 - a.v.real();
  return compose(a, 1.0 / u, 1.0 / (u * u), 2.0 / (u * u * u));
}

// Pointwise integrands. Both return a real-valued jet.
Jet kinetic_jet(xcplx q, xcplx v, const Configuration& cfg) {
  const Jet jq = variable(q, 0), jqb = variable(std::conj(q), 1);
  const Jet jv = variable(v, 2), jvb = variable(std::conj(v), 3);
  if (cfg.planar()) return (real(0.5) * cfg.n) * (jv * jvb);
  const real R = cfg.R();
  const real R2 = R * R;
  const Jet sigma = inverse_gap(jq, jqb, R2);
  // (n/2) 4R^4 |v|^2 / (R^2 - |q|^2)^2
  return (real(2.0) * cfg.n * R2 * R2) * ((jv * jvb) * (sigma * sigma));
}

Jet pair_jet(xcplx q, xcplx p, const Configuration& cfg) {
  const Jet jq = variable(q, 0), jqb = variable(std::conj(q), 1);
  const Jet jp = variable(p, 2), jpb = variable(std::conj(p), 3);
  const Jet e = (jq - jp) * (jqb - jpb);
  if (cfg.planar()) {
    const real E = e.v.real();
    const real s = std::sqrt(E);
    return (real(0.5) * cfg.n) * compose(e, 1.0 / s, -0.5 / (E * s), 0.75 / (E * E * s));
  }
  const real R = cfg.R();
  const real R2 = R * R;
  // g = cosh(dhat/R) - 1 = 2R^2 |q-p|^2 / ((R^2-|q|^2)(R^2-|p|^2)),
  // coth(dhat/R) = (1+g) / sqrt(g(g+2)).
  const Jet g = (2.0 * R2) * (e * (inverse_gap(jq, jqb, R2) * inverse_gap(jp, jpb, R2)));
  const real gv = g.v.real();
  const real w = gv * (gv + 2.0);
  const real sw = std::sqrt(w);
  const real f0 = (1.0 + gv) / sw;
  const real f1 = -1.0 / (w * sw);
  const real f2 = 3.0 * (1.0 + gv) / (w * w * sw);
  return (real(0.5) * cfg.n / R) * compose(g, f0, f1, f2);
}

double separation(cplx q, cplx p, const Configuration& cfg) {
  if (cfg.planar()) return std::abs(q - p);
  const double R2 = cfg.R() * cfg.R();
  return 2.0 * R2 * std::abs(q - p) / std::sqrt((R2 - std::norm(q)) * (R2 - std::norm(p)));
}

bool inside(cplx z, const Configuration& cfg) {
  return cfg.planar() || std::abs(z) <= cfg.R() * (1.0 - kDiskMargin);
}

// exp(2 pi i j / M) table with synthesis and analysis sums.
class ExtendedGrid {
 public:
  explicit ExtendedGrid(int M) : M_(M), roots_(static_cast<std::size_t>(M)) {
    for (int j = 0; j < M; ++j) {
      roots_[static_cast<std::size_t>(j)] = std::polar(real(1), kTwoPiL * j / M);
    }
  }

  int size() const noexcept { return M_; }

  // values[m] = sum_k a[k+K] exp(i k t_m)
  void synthesize(const std::vector<xcplx>& a, std::vector<xcplx>& values) const {
    const int K = static_cast<int>(a.size() / 2);
    values.assign(static_cast<std::size_t>(M_), xcplx{});
    for (int m = 0; m < M_; ++m) {
      long long idx = (static_cast<long long>(-K) * m) % M_;
      if (idx < 0) idx += M_;
      xcplx sum{};
      for (int k = -K; k <= K; ++k) {
        sum += a[static_cast<std::size_t>(k + K)] * roots_[static_cast<std::size_t>(idx)];
        idx += m;
        if (idx >= M_) idx -= M_;
      }
      values[static_cast<std::size_t>(m)] = sum;
    }
  }

  // out[k+K] = sum_m w[m] exp(-i k t_m), k = -K..K
  void analyze(const std::vector<xcplx>& w, int K, std::vector<xcplx>& out) const {
    out.assign(static_cast<std::size_t>(2 * K + 1), xcplx{});
    for (int k = -K; k <= K; ++k) {
      long long step = (-static_cast<long long>(k)) % M_;
      if (step < 0) step += M_;
      long long idx = 0;
      xcplx sum{};
      for (int m = 0; m < M_; ++m) {
        sum += w[static_cast<std::size_t>(m)] * roots_[static_cast<std::size_t>(idx)];
        idx += step;
        if (idx >= M_) idx -= M_;
      }
      out[static_cast<std::size_t>(k + K)] = sum;
    }
  }

 private:
  int M_;
  std::vector<xcplx> roots_;
};

// Node variables: 0 = q, 1 = v = q' + i omega q, 2.. = q(t + 2 pi j/n).
struct NodeSamples {
  int M = 0;
  int K = 0;
  std::vector<std::vector<xcplx>> u;     // [variable][node]
  std::vector<std::vector<xcplx>> beta;  // [variable][k+K]
};

NodeSamples sample(const TrigPath& path, const Configuration& cfg, const ExtendedGrid& grid) {
  NodeSamples s;
  s.M = grid.size();
  s.K = path.bandwidth();
  const int K = s.K;
  const int nv = cfg.n + 1;
  s.u.resize(static_cast<std::size_t>(nv));
  s.beta.assign(static_cast<std::size_t>(nv),
                std::vector<xcplx>(static_cast<std::size_t>(2 * K + 1)));
  for (int k = -K; k <= K; ++k) {
    const auto i = static_cast<std::size_t>(k + K);
    s.beta[0][i] = 1.0L;
    s.beta[1][i] = xcplx(0.0L, k + static_cast<real>(cfg.omega));
    for (int j = 1; j < cfg.n; ++j) {
      // exp(2 pi i k j / n) with the exponent reduced mod n
      const int r = ((k * j) % cfg.n + cfg.n) % cfg.n;
      s.beta[static_cast<std::size_t>(j + 1)][i] = std::polar(real(1), kTwoPiL * r / cfg.n);
    }
  }
  std::vector<xcplx> a(static_cast<std::size_t>(2 * K + 1));
  for (int var = 0; var < nv; ++var) {
    const auto& b = s.beta[static_cast<std::size_t>(var)];
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = b[i] * xcplx(path.coeffs()[i]);
    grid.synthesize(a, s.u[static_cast<std::size_t>(var)]);
  }
  return s;
}

struct WeightPair {
  int alpha;
  int beta;
  std::vector<xcplx> holo;   // L_{u_alpha u_beta}
  std::vector<xcplx> mixed;  // L_{u_alpha conj(u_beta)}
};

}  // namespace

Configuration Configuration::hyperbolic(int n, double R, double omega, int K) {
  Configuration c;
  c.n = n;
  c.radius = CurvatureRadius(R);
  c.omega = omega;
  c.K = K;
  c.validate();
  return c;
}

Configuration Configuration::planar_problem(int n, double omega, int K) {
  Configuration c;
  c.n = n;
  c.omega = omega;
  c.K = K;
  c.validate();
  return c;
}

double Configuration::R() const {
  if (!radius) throw std::logic_error("planar configuration has no curvature radius");
  return radius->value();
}

void Configuration::validate() const {
  if (n < 2) throw std::invalid_argument("need at least two bodies");
  if (K < 1) throw std::invalid_argument("bandwidth K must be at least 1");
  if (quadrature_nodes < 0) throw std::invalid_argument("negative quadrature node count");
}

int Configuration::nodes_for(int bandwidth) const {
  return quadrature_nodes > 0 ? quadrature_nodes : 2 * (2 * bandwidth + 1) + 1;
}

bool ActionEvaluation::finite() const noexcept { return std::isfinite(value); }

ActionEvaluation evaluate_action(const Eigen::Ref<const Eigen::VectorXd>& vars,
                                 const Configuration& config, Derivatives order) {
  config.validate();
  const TrigPath path = unpack(vars);
  const int K = path.bandwidth();
  const int N = path.size();
  const ExtendedGrid grid(config.nodes_for(K));
  const int M = grid.size();
  const int n = config.n;
  const NodeSamples s = sample(path, config, grid);
  const real w = kTwoPiL / M;

  ActionEvaluation out;
  const auto& q = s.u[0];
  const auto& v = s.u[1];
  for (std::size_t var = 0; var < s.u.size(); ++var) {
    if (var == 1) continue;
    for (const auto& z : s.u[var]) {
      if (!inside(cplx(z), config)) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
    }
  }
  for (int j = 1; j < n; ++j) {
    const auto& p = s.u[static_cast<std::size_t>(j + 1)];
    for (int m = 0; m < M; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      if (!(separation(cplx(q[mi]), cplx(p[mi]), config) > kCollisionDistance)) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
      }
    }
  }

  const bool want_grad = order != Derivatives::none;
  const bool want_hess = order == Derivatives::hessian;
  const int nv = n + 1;
  std::vector<std::vector<xcplx>> G;
  if (want_grad) {
    G.assign(static_cast<std::size_t>(nv), std::vector<xcplx>(static_cast<std::size_t>(M)));
  }
  std::vector<WeightPair> pairs;
  auto new_pair = [&](int a, int b) {
    pairs.push_back(WeightPair{a, b, std::vector<xcplx>(static_cast<std::size_t>(M)),
                               std::vector<xcplx>(static_cast<std::size_t>(M))});
    return pairs.size() - 1;
  };
  std::size_t pqq = 0, pqv = 0, pvq = 0, pvv = 0;
  std::vector<std::size_t> pqp, ppq, ppp;
  if (want_hess) {
    pqq = new_pair(0, 0);
    pqv = new_pair(0, 1);
    pvq = new_pair(1, 0);
    pvv = new_pair(1, 1);
    for (int j = 1; j < n; ++j) {
      pqp.push_back(new_pair(0, j + 1));
      ppq.push_back(new_pair(j + 1, 0));
      ppp.push_back(new_pair(j + 1, j + 1));
    }
  }

  real total = 0.0L;
  for (int m = 0; m < M; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    const Jet kin = kinetic_jet(q[mi], v[mi], config);
    total += kin.v.real();
    if (want_grad) {
      G[0][mi] += real(2) * kin.d[1];
      G[1][mi] += real(2) * kin.d[3];
    }
    if (want_hess) {
      pairs[pqq].holo[mi] += kin.dd[0][0];
      pairs[pqq].mixed[mi] += kin.dd[0][1];
      pairs[pqv].holo[mi] += kin.dd[0][2];
      pairs[pqv].mixed[mi] += kin.dd[0][3];
      pairs[pvq].holo[mi] += kin.dd[2][0];
      pairs[pvq].mixed[mi] += kin.dd[2][1];
      pairs[pvv].holo[mi] += kin.dd[2][2];
      pairs[pvv].mixed[mi] += kin.dd[2][3];
    }
    for (int j = 1; j < n; ++j) {
      const auto pj = static_cast<std::size_t>(j + 1);
      const Jet pot = pair_jet(q[mi], s.u[pj][mi], config);
      total += pot.v.real();
      if (want_grad) {
        G[0][mi] += real(2) * pot.d[1];
        G[pj][mi] += real(2) * pot.d[3];
      }
      if (want_hess) {
        const auto jj = static_cast<std::size_t>(j - 1);
        pairs[pqq].holo[mi] += pot.dd[0][0];
        pairs[pqq].mixed[mi] += pot.dd[0][1];
        pairs[pqp[jj]].holo[mi] += pot.dd[0][2];
        pairs[pqp[jj]].mixed[mi] += pot.dd[0][3];
        pairs[ppq[jj]].holo[mi] += pot.dd[2][0];
        pairs[ppq[jj]].mixed[mi] += pot.dd[2][1];
        pairs[ppp[jj]].holo[mi] += pot.dd[2][2];
        pairs[ppp[jj]].mixed[mi] += pot.dd[2][3];
      }
    }
  }
  out.value = static_cast<double>(w * total);
  if (!want_grad) return out;

  // Complex gradient g_k = dA/da_k + i dA/db_k = sum_alpha conj(beta_alpha(k)) G^_alpha(k).
  std::vector<xcplx> gk(static_cast<std::size_t>(N));
  std::vector<xcplx> hat;
  for (int var = 0; var < nv; ++var) {
    grid.analyze(G[static_cast<std::size_t>(var)], K, hat);
    const auto& b = s.beta[static_cast<std::size_t>(var)];
    for (std::size_t i = 0; i < gk.size(); ++i) gk[i] += w * std::conj(b[i]) * hat[i];
  }
  out.gradient.resize(2 * N);
  for (int i = 0; i < N; ++i) {
    out.gradient[i] = static_cast<double>(gk[static_cast<std::size_t>(i)].real());
    out.gradient[N + i] = static_cast<double>(gk[static_cast<std::size_t>(i)].imag());
  }
  if (!want_hess) return out;

  // P_kl = d2A/dc_k dc_l, Q_kl = d2A/dc_k dconj(c_l), from transforms of the
  // nodal weights at frequencies k+l and k-l.
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(N, N);
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(N, N);
  const int S = 2 * K;
  std::vector<xcplx> holo_x, mixed_x;
  std::vector<cplx> holo_hat(static_cast<std::size_t>(2 * S + 1));
  std::vector<cplx> mixed_hat(static_cast<std::size_t>(2 * S + 1));
  std::vector<std::vector<cplx>> beta(s.beta.size());
  for (std::size_t a = 0; a < s.beta.size(); ++a) {
    for (const auto& b : s.beta[a]) beta[a].push_back(cplx(b));
  }
  for (const auto& pr : pairs) {
    grid.analyze(pr.holo, S, holo_x);
    grid.analyze(pr.mixed, S, mixed_x);
    for (std::size_t i = 0; i < holo_hat.size(); ++i) {
      holo_hat[i] = cplx(w * holo_x[i]);
      mixed_hat[i] = cplx(w * mixed_x[i]);
    }
    const auto& ba = beta[static_cast<std::size_t>(pr.alpha)];
    const auto& bb = beta[static_cast<std::size_t>(pr.beta)];
    for (int l = -K; l <= K; ++l) {
      const auto il = static_cast<std::size_t>(l + K);
      const cplx bl = bb[il];
      const cplx blc = std::conj(bl);
      for (int k = -K; k <= K; ++k) {
        const auto ik = static_cast<std::size_t>(k + K);
        // transform index of exp(+i s t) is -s
        const cplx wp = holo_hat[static_cast<std::size_t>(S - (k + l))];
        const cplx wq = mixed_hat[static_cast<std::size_t>(S - (k - l))];
        P(static_cast<Eigen::Index>(ik), static_cast<Eigen::Index>(il)) += ba[ik] * bl * wp;
        Q(static_cast<Eigen::Index>(ik), static_cast<Eigen::Index>(il)) += ba[ik] * blc * wq;
      }
    }
  }
  Eigen::MatrixXd H(2 * N, 2 * N);
  H.topLeftCorner(N, N) = 2.0 * (P + Q).real();
  H.bottomRightCorner(N, N) = 2.0 * (Q - P).real();
  H.topRightCorner(N, N) = 2.0 * (Q - P).imag();
  H.bottomLeftCorner(N, N) = H.topRightCorner(N, N).transpose();
  out.hessian = std::move(H);
  return out;
}

double action_value(const Eigen::Ref<const Eigen::VectorXd>& vars, const Configuration& config) {
  return evaluate_action(vars, config, Derivatives::none).value;
}

Eigen::VectorXd action_gradient(const Eigen::Ref<const Eigen::VectorXd>& vars,
                                const Configuration& config) {
  auto e = evaluate_action(vars, config, Derivatives::gradient);
  if (!e.finite()) throw GeometryError(GeometryError::Kind::collision, "infeasible path");
  return std::move(e.gradient);
}

Eigen::MatrixXd action_hessian(const Eigen::Ref<const Eigen::VectorXd>& vars,
                               const Configuration& config) {
  auto e = evaluate_action(vars, config, Derivatives::hessian);
  if (!e.finite()) throw GeometryError(GeometryError::Kind::collision, "infeasible path");
  return std::move(*e.hessian);
}

std::vector<NodeValues> pairwise_separations(const TrigPath& path, const Configuration& config) {
  config.validate();
  const ExtendedGrid grid(config.nodes_for(path.bandwidth()));
  const NodeSamples s = sample(path, config, grid);
  std::vector<NodeValues> out;
  for (std::size_t var = 0; var < s.u.size(); ++var) {
    if (var == 1) continue;
    for (const auto& z : s.u[var]) {
      if (!config.planar()) require_in_disk(cplx(z), config.R());
    }
  }
  for (int j = 1; j < config.n; ++j) {
    std::vector<cplx> d(static_cast<std::size_t>(s.M));
    for (int m = 0; m < s.M; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      const double D =
          separation(cplx(s.u[0][mi]), cplx(s.u[static_cast<std::size_t>(j + 1)][mi]), config);
      if (!(D > kCollisionDistance)) {
        throw GeometryError(GeometryError::Kind::collision,
                            "bodies 0 and " + std::to_string(j) + " collide at t = " +
                                std::to_string(kTwoPi * m / s.M));
      }
      d[mi] = D;
    }
    out.emplace_back(std::move(d));
  }
  return out;
}

EnergySamples hyperboloid_energies(const TrigPath& path, const Configuration& config, int M) {
  config.validate();
  const CurvatureRadius R(config.R());
  const double r = R.value();
  const double r2 = r * r;
  const TrigPath dpath = derivative(path);
  EnergySamples out;
  const int n = config.n;
  std::vector<HyperboloidPoint> X(static_cast<std::size_t>(n));
  std::vector<HyperboloidPoint> V(static_cast<std::size_t>(n));
  for (int m = 0; m < M; ++m) {
    const double t = kTwoPi * m / M;
    const cplx rot = std::polar(1.0, config.omega * t);
    for (int j = 0; j < n; ++j) {
      const double tj = t + kTwoPi * j / n;
      const cplx z = rot * path(tj);
      const cplx dz = rot * (dpath(tj) + cplx(0.0, config.omega) * path(tj));
      const auto jj = static_cast<std::size_t>(j);
      X[jj] = lift_to_hyperboloid(DiskPoint{z}, R);
      // derivative of the inverse stereographic map along z'
      const double s = r2 - std::norm(z);
      const double ds = -2.0 * (std::conj(z) * dz).real();
      V[jj].x1 = 2.0 * r2 * (dz.real() * s - z.real() * ds) / (s * s);
      V[jj].x2 = 2.0 * r2 * (dz.imag() * s - z.imag() * ds) / (s * s);
      V[jj].x3 = r * (-ds * s - (r2 + std::norm(z)) * ds) / (s * s);
    }
    double kinetic = 0.0;
    for (const auto& vel : V) kinetic += 0.5 * lorentz_inner(vel, vel);
    double potential = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        const double dhat =
            geodesic_hyperboloid(X[static_cast<std::size_t>(i)], X[static_cast<std::size_t>(j)], R);
        if (!(dhat > 0.0)) {
          throw GeometryError(GeometryError::Kind::collision, "bodies collide on the hyperboloid");
        }
        potential -= 1.0 / (r * std::tanh(dhat / r));
      }
    }
    out.t.push_back(t);
    out.kinetic.push_back(kinetic);
    out.potential.push_back(potential);
  }
  return out;
}

}  // namespace hypchoreo
