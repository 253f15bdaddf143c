#include "hypchoreo/trigpath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypchoreo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double NodeValues::node(int m) const { return kTwoPi * m / size(); }

TrigPath::TrigPath(int K) : K_(K) {
  if (K < 0) throw std::invalid_argument("bandwidth must be nonnegative");
  c_.assign(static_cast<std::size_t>(2 * K + 1), cplx{});
}

TrigPath::TrigPath(std::vector<cplx> coeffs) : K_(0), c_(std::move(coeffs)) {
  if (c_.empty() || c_.size() % 2 == 0) {
    throw std::invalid_argument("coefficient count must be odd (2K+1), got " +
                                std::to_string(c_.size()));
  }
  K_ = static_cast<int>(c_.size() / 2);
}

cplx TrigPath::operator()(double t) const { return derivative_at(t, 0); }

cplx TrigPath::derivative_at(double t, int order) const {
  cplx sum{};
  for (int k = -K_; k <= K_; ++k) {
    cplx f = std::polar(1.0, k * t);
    for (int o = 0; o < order; ++o) f *= cplx(0.0, k);
    sum += (*this)[k] * f;
  }
  return sum;
}

TrigPath& TrigPath::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  return *this;
}

NodeGrid::NodeGrid(int M) : M_(M) {
  if (M < 1) throw std::invalid_argument("node grid needs at least one node");
  roots_.resize(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) roots_[static_cast<std::size_t>(j)] = std::polar(1.0, kTwoPi * j / M);
}

double NodeGrid::node(int m) const noexcept { return kTwoPi * m / M_; }

cplx NodeGrid::root(long long j) const noexcept {
  long long r = j % M_;
  if (r < 0) r += M_;
  return roots_[static_cast<std::size_t>(r)];
}

void NodeGrid::synthesize(std::span<const cplx> a, std::span<cplx> values) const {
  const int K = static_cast<int>(a.size() / 2);
  for (int m = 0; m < M_; ++m) {
    cplx sum{};
    long long idx = (static_cast<long long>(-K) * m) % M_;
    if (idx < 0) idx += M_;
    for (int k = -K; k <= K; ++k) {
      sum += a[static_cast<std::size_t>(k + K)] * roots_[static_cast<std::size_t>(idx)];
      idx += m;
      if (idx >= M_) idx -= M_;
    }
    values[static_cast<std::size_t>(m)] = sum;
  }
}

void NodeGrid::analyze(std::span<const cplx> w, int K, std::span<cplx> out) const {
  for (int k = -K; k <= K; ++k) {
    cplx sum{};
    long long idx = 0;
    // exp(-i k t_m) = root(-k m)
    long long step = (-static_cast<long long>(k)) % M_;
    if (step < 0) step += M_;
    for (int m = 0; m < M_; ++m) {
      sum += w[static_cast<std::size_t>(m)] * roots_[static_cast<std::size_t>(idx)];
      idx += step;
      if (idx >= M_) idx -= M_;
    }
    out[static_cast<std::size_t>(k + K)] = sum;
  }
}

NodeValues eval_at_nodes(const TrigPath& path, int N) {
  if (N < path.size()) {
    throw std::invalid_argument("undersampled grid: N = " + std::to_string(N) +
                                " < 2K+1 = " + std::to_string(path.size()));
  }
  NodeGrid grid(N);
  std::vector<cplx> v(static_cast<std::size_t>(N));
  grid.synthesize(path.coeffs(), v);
  return NodeValues(std::move(v));
}

TrigPath from_samples(const NodeValues& samples) {
  const int N = samples.size();
  if (N < 1 || N % 2 == 0) {
    throw std::invalid_argument("from_samples needs an odd node count, got " + std::to_string(N));
  }
  const int K = N / 2;
  NodeGrid grid(N);
  std::vector<cplx> c(static_cast<std::size_t>(N));
  grid.analyze(samples.values, K, c);
  for (auto& x : c) x /= static_cast<double>(N);
  return TrigPath(std::move(c));
}

TrigPath derivative(const TrigPath& path) {
  TrigPath d(path.bandwidth());
  for (int k = -path.bandwidth(); k <= path.bandwidth(); ++k) d[k] = cplx(0.0, k) * path[k];
  return d;
}

TrigPath shift(const TrigPath& path, double tau) {
  TrigPath s(path.bandwidth());
  for (int k = -path.bandwidth(); k <= path.bandwidth(); ++k) {
    s[k] = path[k] * std::polar(1.0, k * tau);
  }
  return s;
}

TrigPath rotate(const TrigPath& path, double theta) {
  return std::polar(1.0, theta) * path;
}

cplx trapezoid_integral(const NodeValues& values) {
  if (values.size() < 1) throw std::invalid_argument("trapezoid rule needs at least one node");
  cplx sum{};
  for (const auto& v : values.values) sum += v;
  return sum * (kTwoPi / values.size());
}

TrigPath pad(const TrigPath& path, int K2) {
  if (K2 < path.bandwidth()) {
    throw std::invalid_argument("pad cannot shrink the bandwidth; use truncate");
  }
  return resize(path, K2);
}

TrigPath truncate(const TrigPath& path, int K2) {
  if (K2 > path.bandwidth()) {
    throw std::invalid_argument("truncate cannot grow the bandwidth; use pad");
  }
  return resize(path, K2);
}

TrigPath resize(const TrigPath& path, int K2) {
  TrigPath out(K2);
  const int K = std::min(K2, path.bandwidth());
  for (int k = -K; k <= K; ++k) out[k] = path[k];
  return out;
}

Eigen::VectorXd pack(const TrigPath& path) {
  const int N = path.size();
  Eigen::VectorXd v(2 * N);
  for (int i = 0; i < N; ++i) {
    v[i] = path.coeffs()[static_cast<std::size_t>(i)].real();
    v[N + i] = path.coeffs()[static_cast<std::size_t>(i)].imag();
  }
  return v;
}

TrigPath unpack(const Eigen::Ref<const Eigen::VectorXd>& vars) {
  if (vars.size() % 2 != 0 || (vars.size() / 2) % 2 == 0) {
    throw std::invalid_argument("packed variable count must be 2(2K+1)");
  }
  const auto N = vars.size() / 2;
  std::vector<cplx> c(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) c[static_cast<std::size_t>(i)] = cplx(vars[i], vars[N + i]);
  return TrigPath(std::move(c));
}

}  // namespace hypchoreo
