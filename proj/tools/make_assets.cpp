// Regenerates the bundled seeds and solutions in the asset directory:
//   make_assets <asset-dir>
// For every orbit it writes <name>_seed.json, <name>.json (two-phase solve
// from the seed) and <name>_planar.json (the R = inf member of its family).

#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hypchoreo/continuation.hpp"
#include "hypchoreo/solution_file.hpp"

using namespace hypchoreo;

namespace {

struct Asset {
  std::string name;
  int n;
  double R;
  double omega;
  int K1;
  int K2;
  std::function<TrigPath(const Configuration&)> seed;
};

// 0.5 sin t + 0.2 i sin 2t.
TrigPath figure_eight_seed(const Configuration& config) {
  TrigPath p(config.K);
  p[1] = cplx(0.0, -0.25);
  p[-1] = cplx(0.0, 0.25);
  p[2] = 0.1;
  p[-2] = -0.1;
  return p;
}

std::function<TrigPath(const Configuration&)> random(int seed_K, int modes, std::uint64_t s) {
  return [=](const Configuration& config) {
    Configuration c = config;
    c.K = seed_K;
    return resize(random_seed(c, modes, s), config.K);
  };
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_assets <asset-dir>\n");
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  const std::vector<Asset> assets = {
      {"figure_eight", 3, 1.5, 0.0, 27, 52, figure_eight_seed},
      {"five_body_a", 5, 1.2, 0.0, 37, 152, random(32, 3, 0)},
      {"five_body_b", 5, 1.2, 0.0, 27, 77, random(32, 3, 3)},
      {"five_body_c", 5, 1.2, 0.0, 32, 122, random(32, 3, 11)},
      {"relative_a", 5, 2.0, 2.8, 50, 125, random(50, 4, 5)},
      {"relative_b", 5, 2.0, -2.9, 27, 77, random(27, 3, 23)},
      {"relative_c", 4, 2.0, 2.31, 27, 77, random(27, 3, 19)},
  };

  int status = 0;
  for (const Asset& a : assets) {
    const Configuration config = Configuration::hyperbolic(a.n, a.R, a.omega, a.K1);
    Choreography seed{config, a.seed(config), {}};
    write_solution(dir / (a.name + "_seed.json"), seed);

    Phase2Options o2;
    o2.K2 = a.K2;
    const Choreography sol = solve(config, seed.path, Phase1Options{}, o2);
    const Verification v = verify_all(sol, Thresholds{});
    std::printf("%-13s action %.15g  residual %.2e  %s\n", a.name.c_str(),
                sol.report.phase2 ? sol.report.phase2->action : 0.0, v.residual,
                v.passed ? "ok" : v.failure.c_str());
    if (!sol.report.ok() || !v.passed) {
      status = 2;
      continue;
    }
    write_solution(dir / (a.name + ".json"), sol);

    const Choreography planar = planar_counterpart(sol);
    const Verification vp = verify_all(planar, Thresholds{});
    std::printf("%-13s planar action %.15g  residual %.2e  %s\n", a.name.c_str(),
                planar.report.phase2 ? planar.report.phase2->action : 0.0, vp.residual,
                vp.passed ? "ok" : vp.failure.c_str());
    if (!planar.report.ok() || !vp.passed) {
      status = 2;
      continue;
    }
    write_solution(dir / (a.name + "_planar.json"), planar);
  }
  return status;
}
