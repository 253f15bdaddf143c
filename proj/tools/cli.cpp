#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "hypchoreo/continuation.hpp"
#include "hypchoreo/optimizer.hpp"
#include "hypchoreo/solution_file.hpp"
#include "hypchoreo/verify.hpp"

namespace hypchoreo::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// "inf" selects the planar problem.
std::optional<double> parse_radius(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "inf" || l == "infinity" || l == "planar") return std::nullopt;
  std::size_t used = 0;
  double r = 0.0;
  try {
    r = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("--R must be a positive number or inf");
  }
  if (used != s.size() || !(r > 0.0) || !std::isfinite(r)) {
    throw UsageError("--R must be a positive number or inf");
  }
  return r;
}

Configuration make_config(int n, const std::optional<double>& R, double omega, int K) {
  try {
    Configuration c = R ? Configuration::hyperbolic(n, *R, omega, K)
                        : Configuration::planar_problem(n, omega, K);
    c.validate();
    return c;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::optional<std::uint64_t> parse_integer_seed(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return std::nullopt;
  }
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

int default_modes(const Configuration& c) { return std::min(3, c.K); }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto r = parse_radius(item);
    if (!r) throw UsageError("--R-list entries must be finite");
    out.push_back(*r);
  }
  if (out.empty()) throw UsageError("--R-list is empty");
  return out;
}

void print_verification(std::ostream& out, const Verification& v) {
  out << "decay     " << fmt("%.3e", v.decay) << "\n"
      << "gradient  " << fmt("%.3e", v.gradient) << "\n"
      << "residual  " << fmt("%.3e", v.residual) << "\n"
      << (v.passed ? "PASS" : "FAIL: " + v.failure) << "\n";
}

bool converged(const Choreography& c, const Thresholds& thr) {
  return c.report.ok() && verify_all(c, thr).passed;
}

// Writes text to path through a temporary file.
void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw FileError("cannot open " + tmp.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw FileError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw FileError("cannot rename onto " + path.string());
}

struct SolveArgs {
  int n = 3;
  std::string R = "inf";
  double omega = 0.0;
  int K = 27;
  std::string seed = "0";
  int modes = 0;
  int K2 = 0;
  std::string out;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const Configuration config = make_config(a.n, parse_radius(a.R), a.omega, a.K);
  TrigPath seed;
  if (const auto s = parse_integer_seed(a.seed)) {
    const int modes = a.modes > 0 ? a.modes : default_modes(config);
    try {
      seed = random_seed(config, modes, *s);
    } catch (const std::runtime_error& e) {
      err << "infeasible seed: " << e.what() << "\n";
      return kInfeasible;
    }
  } else {
    seed = read_solution(a.seed).path;
  }
  Phase2Options o2;
  o2.K2 = a.K2;
  Choreography c;
  try {
    c = solve(config, seed, Phase1Options{}, o2);
  } catch (const GeometryError& e) {
    err << "infeasible seed: " << e.what() << "\n";
    return kInfeasible;
  }
  out << format_report(c.report);
  const Verification v = verify_all(c, Thresholds{});
  if (!c.report.ok() || !v.passed) {
    err << "not converged: " << (c.report.ok() ? v.failure : c.report.failure) << "\n";
    return kNotConverged;
  }
  if (!a.out.empty()) {
    write_solution(a.out, c);
    out << "wrote " << a.out << "\n";
  }
  return kOk;
}

int cmd_verify(const std::string& file, const Thresholds& thr, std::ostream& out) {
  const Choreography c = read_solution(file);
  const Verification v = verify_all(c, thr);
  print_verification(out, v);
  return v.passed ? kOk : kNotConverged;
}

int cmd_sweep(const std::string& family, const std::string& list, const std::string& name,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<double> Rs = parse_list(list);
  std::sort(Rs.begin(), Rs.end(), std::greater<>());
  Rs.erase(std::unique(Rs.begin(), Rs.end()), Rs.end());
  Choreography start = read_solution(family);
  if (!start.config.planar()) {
    start = planar_counterpart(start);
    if (!start.report.ok()) {
      err << "no planar counterpart: " << start.report.failure << "\n";
      return kNotConverged;
    }
  }
  const FamilySweep sweep = continue_in_R(start, Rs);
  std::vector<FamilyMember> ascending(sweep.members.rbegin(), sweep.members.rend());
  const std::string label = name.empty() ? std::filesystem::path(family).stem().string() : name;
  const std::string csv = sweep_csv(label, ascending);
  if (out_path.empty()) {
    out << csv;
  } else {
    write_text(out_path, csv);
  }
  if (!sweep.ok()) {
    err << "sweep stopped: " << sweep.failure << "\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_export(const std::string& file, const std::string& format, int samples,
               const std::string& out_path, std::ostream& out) {
  if (format != "csv" && format != "coeffs") throw UsageError("--format must be csv or coeffs");
  if (samples < 1) throw UsageError("--samples must be positive");
  const Choreography c = read_solution(file);
  std::ostringstream s;
  const TrigPath& p = c.path;
  if (format == "coeffs") {
    s << "k,abs_ck\n";
    for (int k = -p.bandwidth(); k <= p.bandwidth(); ++k) {
      s << k << "," << fmt("%.17g", std::abs(p[k])) << "\n";
    }
  } else {
    const int n = c.config.n;
    s << "t";
    for (int j = 0; j < n; ++j) s << ",re_z" << j << ",im_z" << j;
    if (!c.config.planar()) {
      for (int j = 0; j < n; ++j) s << ",x1_" << j << ",x2_" << j << ",x3_" << j;
    }
    s << "\n";
    std::optional<CurvatureRadius> R;
    if (!c.config.planar()) R = CurvatureRadius(c.config.R());
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int m = 0; m < samples; ++m) {
      const double t = kTwoPi * m / samples;
      const cplx rot = std::polar(1.0, c.config.omega * t);
      for (int j = 0; j < n; ++j) z[static_cast<std::size_t>(j)] = rot * p(t + kTwoPi * j / n);
      s << fmt("%.17g", t);
      for (const cplx& v : z) s << "," << fmt("%.17g", v.real()) << "," << fmt("%.17g", v.imag());
      if (R) {
        for (const cplx& v : z) {
          require_in_disk(v, R->value());
          const HyperboloidPoint X = lift_to_hyperboloid(DiskPoint{v}, *R);
          s << "," << fmt("%.17g", X.x1) << "," << fmt("%.17g", X.x2) << ","
            << fmt("%.17g", X.x3);
        }
      }
      s << "\n";
    }
  }
  if (out_path.empty()) {
    out << s.str();
  } else {
    write_text(out_path, s.str());
  }
  return kOk;
}

struct SearchArgs {
  int n = 3;
  std::string R = "inf";
  double omega = 0.0;
  int K = 27;
  int K2 = 0;
  int modes = 0;
  int trials = 10;
  std::uint64_t rng = 0;
  int jobs = 0;
  std::string out_dir = ".";
  std::string prefix = "search";
};

// Runs f(i) for i in [0, count) on up to jobs threads.
template <class F>
void parallel_for(int count, int jobs, F f) {
  const int workers = std::max(1, std::min(jobs, count));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.trials < 1) throw UsageError("--trials must be positive");
  const Configuration config = make_config(a.n, parse_radius(a.R), a.omega, a.K);
  const int modes = a.modes > 0 ? a.modes : default_modes(config);
  const int jobs = a.jobs > 0 ? a.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  Phase2Options o2;
  o2.K2 = a.K2;

  // Phase 1 from every seed; trial i uses seed rng + i.
  std::vector<std::optional<PhaseResult>> p1(static_cast<std::size_t>(a.trials));
  parallel_for(a.trials, jobs, [&](int i) {
    try {
      const TrigPath seed = random_seed(config, modes, a.rng + static_cast<std::uint64_t>(i));
      PhaseResult r = phase1_bfgs(pack(resize(seed, config.K)), config, Phase1Options{});
      if (r.failure.empty()) p1[static_cast<std::size_t>(i)] = std::move(r);
    } catch (const std::exception&) {
    }
  });
  auto distinct = [](const std::vector<double>& seen, double A) {
    return std::none_of(seen.begin(), seen.end(),
                        [A](double s) { return std::abs(s - A) <= 1e-6 * std::abs(A); });
  };
  std::vector<int> picked;
  std::vector<double> seen;
  for (int i = 0; i < a.trials; ++i) {
    const auto& r = p1[static_cast<std::size_t>(i)];
    if (r && distinct(seen, r->action)) {
      seen.push_back(r->action);
      picked.push_back(i);
    }
  }

  std::vector<std::optional<Choreography>> refined(picked.size());
  parallel_for(static_cast<int>(picked.size()), jobs, [&](int i) {
    const auto idx = static_cast<std::size_t>(picked[static_cast<std::size_t>(i)]);
    try {
      Choreography c = finish_solve(config, *p1[idx], o2);
      if (converged(c, Thresholds{})) refined[static_cast<std::size_t>(i)] = std::move(c);
    } catch (const GeometryError&) {
    }
  });

  std::vector<std::pair<int, Choreography>> found;
  seen.clear();
  for (std::size_t i = 0; i < refined.size(); ++i) {
    if (!refined[i]) continue;
    const double A = refined[i]->report.final_phase()->action;
    if (!distinct(seen, A)) continue;
    seen.push_back(A);
    found.emplace_back(picked[i], std::move(*refined[i]));
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    return x.second.report.final_phase()->action < y.second.report.final_phase()->action;
  });
  if (found.empty()) {
    err << "no trial converged\n";
    return kNotConverged;
  }
  std::filesystem::create_directories(a.out_dir);
  out << "rank,trial,action,gradient,residual,file\n";
  for (std::size_t r = 0; r < found.size(); ++r) {
    const auto& [trial, c] = found[r];
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu.json", a.prefix.c_str(), r + 1);
    const std::filesystem::path path = std::filesystem::path(a.out_dir) / name;
    write_solution(path, c);
    const PhaseReport& ph = *c.report.final_phase();
    out << r + 1 << "," << trial << "," << fmt("%.12f", ph.action) << ","
        << fmt("%.3e", ph.gradient_rel_norm) << "," << fmt("%.3e", ph.residual_rel_norm) << ","
        << path.string() << "\n";
  }
  return kOk;
}

}  // namespace

std::string format_report(const SolveReport& report) {
  const PhaseReport* phases[2] = {report.phase1 ? &*report.phase1 : nullptr,
                                  report.phase2 ? &*report.phase2 : nullptr};
  std::ostringstream s;
  char line[160];
  auto row = [&](const char* label, auto value) {
    std::snprintf(line, sizeof line, "%-34s", label);
    s << line;
    for (const PhaseReport* p : phases) {
      std::snprintf(line, sizeof line, "%22s", p ? value(*p).c_str() : "-");
      s << line;
    }
    s << "\n";
  };
  std::snprintf(line, sizeof line, "%-34s%22s%22s\n", "", "Phase 1: BFGS", "Phase 2: Newton");
  s << line;
  row("Action", [](const PhaseReport& p) { return fmt("%.15f", p.action); });
  row("Number of coefficients",
      [](const PhaseReport& p) { return std::to_string(p.coefficient_count); });
  row("Computer time (s)", [](const PhaseReport& p) { return fmt("%.4f", p.wall_time_seconds); });
  row("Number of iterations", [](const PhaseReport& p) { return std::to_string(p.iterations); });
  row("Relative 2-norm of the gradient",
      [](const PhaseReport& p) { return fmt("%.2e", p.gradient_rel_norm); });
  row("Smallest coefficient", [](const PhaseReport& p) { return fmt("%.2e", p.smallest_coefficient); });
  row("Relative 2-norm of the residual",
      [](const PhaseReport& p) { return fmt("%.2e", p.residual_rel_norm); });
  return s.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperbolic and planar n-body choreographies"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Two-phase solve from a seed");
  solve_cmd->add_option("--n", sa.n, "Number of bodies")->required();
  solve_cmd->add_option("--R", sa.R, "Curvature radius, or inf for the plane")->required();
  solve_cmd->add_option("--omega", sa.omega, "Angular velocity of the rotating frame");
  solve_cmd->add_option("--K", sa.K, "Phase 1 bandwidth (2K+1 coefficients)")->required();
  solve_cmd->add_option("--seed", sa.seed, "Random seed integer or seed file")->required();
  solve_cmd->add_option("--modes", sa.modes, "Modes of a random seed (default min(3, K))");
  solve_cmd->add_option("--K2", sa.K2, "Phase 2 bandwidth (default 2K-2)");
  solve_cmd->add_option("--out", sa.out, "Solution file to write");

  std::string verify_file;
  Thresholds thr;
  auto* verify_cmd = app.add_subcommand("verify", "Check decay, gradient and residual");
  verify_cmd->add_option("file", verify_file, "Solution file")->required();
  verify_cmd->add_option("--decay", thr.decay, "Coefficient decay threshold");
  verify_cmd->add_option("--gradient", thr.gradient, "Relative gradient threshold");
  verify_cmd->add_option("--residual", thr.residual, "Residual threshold");

  std::string family, rlist, name, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Continue a family in R against the planar limit");
  sweep_cmd->add_option("--family", family, "Planar or hyperbolic solution file")->required();
  sweep_cmd->add_option("--R-list", rlist, "Comma-separated radii")->required();
  sweep_cmd->add_option("--name", name, "Family label in the CSV (default file stem)");
  sweep_cmd->add_option("--out", sweep_out, "CSV file (default standard output)");

  std::string export_file, format = "csv", export_out;
  int samples = 2048;
  auto* export_cmd = app.add_subcommand("export", "Orbit samples or coefficient magnitudes");
  export_cmd->add_option("file", export_file, "Solution file")->required();
  export_cmd->add_option("--format", format, "csv or coeffs");
  export_cmd->add_option("--samples", samples, "Time samples for csv");
  export_cmd->add_option("--out", export_out, "Output file (default standard output)");

  SearchArgs qa;
  auto* search_cmd = app.add_subcommand("search", "Solve from many random seeds");
  search_cmd->add_option("--n", qa.n, "Number of bodies")->required();
  search_cmd->add_option("--R", qa.R, "Curvature radius, or inf for the plane")->required();
  search_cmd->add_option("--omega", qa.omega, "Angular velocity of the rotating frame");
  search_cmd->add_option("--K", qa.K, "Phase 1 bandwidth")->required();
  search_cmd->add_option("--K2", qa.K2, "Phase 2 bandwidth (default 2K-2)");
  search_cmd->add_option("--modes", qa.modes, "Modes of the random seeds (default min(3, K))");
  search_cmd->add_option("--trials", qa.trials, "Number of seeds")->required();
  search_cmd->add_option("--rng", qa.rng, "First seed; trial i uses rng + i")->required();
  search_cmd->add_option("--jobs", qa.jobs, "Worker threads (default: all cores)");
  search_cmd->add_option("--out-dir", qa.out_dir, "Directory for the solution files");
  search_cmd->add_option("--prefix", qa.prefix, "Solution file name prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(sa, out, err);
    if (*verify_cmd) return cmd_verify(verify_file, thr, out);
    if (*sweep_cmd) return cmd_sweep(family, rlist, name, sweep_out, out, err);
    if (*export_cmd) return cmd_export(export_file, format, samples, export_out, out);
    if (*search_cmd) return cmd_search(qa, out, err);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const FileError& e) {
    err << e.what() << "\n";
    return kFileError;
  } catch (const GeometryError& e) {
    err << e.what() << "\n";
    return kNotConverged;
  }
  return kUsage;
}

}  // namespace hypchoreo::cli
