#pragma once

// 2pi-periodic complex trajectories stored as centered Fourier coefficients
// c_{-K}..c_K, q(t) = sum_k c_k exp(ikt).

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace hypchoreo {

using cplx = std::complex<double>;

/// Samples at the equispaced nodes t_m = 2 pi m / N, m = 0..N-1.
struct NodeValues {
  std::vector<cplx> values;

  NodeValues() = default;
  explicit NodeValues(std::vector<cplx> v) : values(std::move(v)) {}
  int size() const noexcept { return static_cast<int>(values.size()); }
  double node(int m) const;
};

class TrigPath {
 public:
  TrigPath() : TrigPath(0) {}
  /// Zero path of bandwidth K.
  explicit TrigPath(int K);
  /// Takes 2K+1 coefficients ordered k = -K..K.
  explicit TrigPath(std::vector<cplx> coeffs);

  int bandwidth() const noexcept { return K_; }
  int size() const noexcept { return 2 * K_ + 1; }

  cplx& operator[](int k) { return c_[static_cast<std::size_t>(k + K_)]; }
  const cplx& operator[](int k) const { return c_[static_cast<std::size_t>(k + K_)]; }

  std::span<const cplx> coeffs() const noexcept { return c_; }
  std::span<cplx> coeffs() noexcept { return c_; }

  cplx operator()(double t) const;
  cplx derivative_at(double t, int order = 1) const;

  TrigPath& operator*=(cplx s);
  friend TrigPath operator*(cplx s, TrigPath p) { return p *= s; }
  friend bool operator==(const TrigPath&, const TrigPath&) = default;

 private:
  int K_;
  std::vector<cplx> c_;
};

/// Values of the path at N equispaced nodes. Requires N >= 2K+1.
NodeValues eval_at_nodes(const TrigPath& path, int N);

/// Interpolating trigonometric polynomial through N = 2K+1 samples (N odd).
TrigPath from_samples(const NodeValues& samples);

TrigPath derivative(const TrigPath& path);

/// q(t + tau).
TrigPath shift(const TrigPath& path, double tau);

/// e^{i theta} q(t).
TrigPath rotate(const TrigPath& path, double theta);

/// (2 pi / N) sum_m values[m].
cplx trapezoid_integral(const NodeValues& values);

/// Same function with bandwidth K2 >= K.
TrigPath pad(const TrigPath& path, int K2);

/// Drops modes with |k| > K2.
TrigPath truncate(const TrigPath& path, int K2);

/// Resizes to K2, padding or truncating.
TrigPath resize(const TrigPath& path, int K2);

// Real optimization variables, [Re c_{-K}..Re c_K, Im c_{-K}..Im c_K].
Eigen::VectorXd pack(const TrigPath& path);
TrigPath unpack(const Eigen::Ref<const Eigen::VectorXd>& vars);

/// Evaluates sums of the form sum_k a_k exp(i k t_m) on a fixed grid of M
/// nodes with a precomputed table of roots of unity.
class NodeGrid {
 public:
  explicit NodeGrid(int M);

  int size() const noexcept { return M_; }
  double node(int m) const noexcept;
  /// exp(2 pi i j / M) for any integer j.
  cplx root(long long j) const noexcept;

  /// values[m] = sum_{k=-K..K} a[k+K] exp(i k t_m).
  void synthesize(std::span<const cplx> a, std::span<cplx> values) const;
  /// out[k+K] = sum_m w[m] exp(-i k t_m) for k = -K..K.
  void analyze(std::span<const cplx> w, int K, std::span<cplx> out) const;

 private:
  int M_;
  std::vector<cplx> roots_;
};

}  // namespace hypchoreo
