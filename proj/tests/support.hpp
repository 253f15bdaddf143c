#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include "hypchoreo/solution_file.hpp"
#include "hypchoreo/trigpath.hpp"

namespace hypchoreo::test {

inline std::filesystem::path asset(const std::string& name) {
  return std::filesystem::path(HYPCHOREO_ASSET_DIR) / name;
}

inline Choreography load(const std::string& name) { return read_solution(asset(name)); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Random path with |k| <= modes, amplitude 2^-|k| times scale, stored at bandwidth K.
inline TrigPath random_path(std::mt19937_64& rng, int K, int modes, double scale) {
  std::normal_distribution<double> g;
  TrigPath p(K);
  for (int k = -modes; k <= modes; ++k) {
    p[k] = scale * std::ldexp(1.0, -std::abs(k)) * cplx(g(rng), g(rng));
  }
  return p;
}

inline double max_abs(const TrigPath& a, const TrigPath& b) {
  double w = 0.0;
  for (int k = -a.bandwidth(); k <= a.bandwidth(); ++k) w = std::max(w, std::abs(a[k] - b[k]));
  return w;
}

}  // namespace hypchoreo::test
