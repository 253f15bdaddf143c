#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "hypchoreo/geometry.hpp"
#include "hypchoreo/solution_file.hpp"
#include "support.hpp"

using namespace hypchoreo;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hypchoreo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"solve", "--n", "3"}).code == cli::kUsage);
  CHECK(run({"solve", "--n", "3", "--R", "-2", "--K", "5", "--seed", "1"}).code == cli::kUsage);
  CHECK(run({"solve", "--n", "1", "--R", "2", "--K", "5", "--seed", "1"}).code == cli::kUsage);
  CHECK(run({"export", test::asset("figure_eight.json").string(), "--format", "png"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("solve from the bundled seed") {
  TempDir dir("hypchoreo_cli_solve");
  const Run r = run({"solve", "--n", "3", "--R", "1.5", "--K", "27", "--K2", "52", "--seed",
                     test::asset("figure_eight_seed.json").string(), "--out", dir / "f8.json"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("27.840867421590") != std::string::npos);
  CHECK(r.out.find("Relative 2-norm of the residual") != std::string::npos);
  const Choreography c = read_solution(dir / "f8.json");
  CHECK(c.path.size() == 105);
  CHECK(run({"verify", dir / "f8.json"}).code == cli::kOk);
}

TEST_CASE("solve failures") {
  TempDir dir("hypchoreo_cli_fail");
  // five modes cannot carry the figure-eight to the default thresholds
  const Run bad = run({"solve", "--n", "3", "--R", "1.5", "--K", "2", "--K2", "2", "--seed",
                       test::asset("figure_eight_seed.json").string(), "--out", dir / "x.json"});
  CHECK(bad.code == cli::kNotConverged);
  CHECK_FALSE(std::filesystem::exists(dir / "x.json"));
  CHECK(run({"solve", "--n", "3", "--R", "1.5", "--K", "5", "--seed", dir / "none.json"}).code ==
        cli::kFileError);
  // two bodies in antiphase on the same point: the seed collides
  {
    Choreography s;
    s.config = Configuration::hyperbolic(2, 1.0, 0.0, 2);
    s.path = TrigPath(2);
    s.path[0] = 0.3;
    write_solution(dir / "still.json", s);
  }
  CHECK(run({"solve", "--n", "2", "--R", "1", "--K", "2", "--seed", dir / "still.json"}).code ==
        cli::kInfeasible);
}

TEST_CASE("verify") {
  TempDir dir("hypchoreo_cli_verify");
  const Run ok = run({"verify", test::asset("figure_eight.json").string()});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.find("PASS") != std::string::npos);
  CHECK(run({"verify", test::asset("figure_eight_planar.json").string()}).code == cli::kOk);

  Choreography f8 = test::load("figure_eight.json");
  f8.path = truncate(f8.path, f8.path.bandwidth() / 2);
  write_solution(dir / "half.json", f8);
  const Run half = run({"verify", dir / "half.json", "--decay", "1"});
  CHECK(half.code == cli::kNotConverged);
  CHECK(half.out.find("residual") != std::string::npos);

  std::ofstream(dir / "junk.json") << "{\"format_version\": 1";
  CHECK(run({"verify", dir / "junk.json"}).code == cli::kFileError);
}

TEST_CASE("export") {
  const Choreography f8 = test::load("figure_eight.json");
  const Run csv = run({"export", test::asset("figure_eight.json").string(), "--samples", "60"});
  REQUIRE(csv.code == cli::kOk);
  std::string header;
  const auto rows = parse_csv(csv.out, header);
  CHECK(header.rfind("t,re_z0,im_z0,re_z1,im_z1,re_z2,im_z2,x1_0,x2_0,x3_0", 0) == 0);
  REQUIRE(rows.size() == 60);
  const double R = f8.config.R();
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const auto& row = rows[m];
    REQUIRE(row.size() == 1 + 6 + 9);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::hypot(row[1 + 2 * j], row[2 + 2 * j]) < R);
      const double x1 = row[7 + 3 * j], x2 = row[8 + 3 * j], x3 = row[9 + 3 * j];
      CHECK(std::abs(x1 * x1 + x2 * x2 - x3 * x3 + R * R) <= 1e-12 * R * R * std::max(1.0, x3 * x3));
    }
    // body 1 at row m is body 0 at row m + 20 (a third of the period later)
    const auto& later = rows[(m + 20) % 60];
    CHECK(std::abs(row[3] - later[1]) < 1e-13);
    CHECK(std::abs(row[4] - later[2]) < 1e-13);
  }
  CHECK(run({"export", test::asset("figure_eight.json").string(), "--samples", "60"}).out == csv.out);

  const Run coeffs = run({"export", test::asset("figure_eight.json").string(), "--format", "coeffs"});
  REQUIRE(coeffs.code == cli::kOk);
  const auto c = parse_csv(coeffs.out, header);
  CHECK(header == "k,abs_ck");
  REQUIRE(c.size() == 105);
  CHECK(c.front()[0] == -52);
  CHECK(c.front()[1] < 1e-14);
  CHECK(c.back()[1] < 1e-14);
  CHECK(run({"export", "no_such_file.json"}).code == cli::kFileError);
}

TEST_CASE("sweep") {
  TempDir dir("hypchoreo_cli_sweep");
  const Run one = run({"sweep", "--family", test::asset("figure_eight_planar.json").string(),
                       "--R-list", "100", "--name", "f8"});
  REQUIRE(one.code == cli::kOk);
  CHECK(one.out.rfind("family,R,diff,slope\nf8,1.000000e+02,", 0) == 0);
  CHECK(one.out.back() == '\n');
  CHECK(one.out.substr(one.out.size() - 2) == ",\n");

  const Run three = run({"sweep", "--family", test::asset("figure_eight_planar.json").string(),
                         "--R-list", "10,1000,100", "--out", dir / "f8.csv"});
  REQUIRE(three.code == cli::kOk);
  std::ifstream in(dir / "f8.csv");
  std::string line, last;
  int count = 0;
  std::getline(in, line);
  while (std::getline(in, line)) {
    ++count;
    last = line;
  }
  CHECK(count == 3);
  CHECK(last.rfind("figure_eight_planar,1.000000e+03,", 0) == 0);
  const double slope = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("search is deterministic") {
  TempDir a("hypchoreo_cli_search_a"), b("hypchoreo_cli_search_b");
  const std::vector<std::string> common = {"search", "--n", "3", "--R", "1.5", "--K", "12",
                                           "--K2", "24", "--trials", "4", "--rng", "7"};
  auto with = [&](const TempDir& d, const std::string& jobs) {
    auto args = common;
    args.insert(args.end(), {"--jobs", jobs, "--out-dir", d.path.string(), "--prefix", "s"});
    return run(args);
  };
  const Run ra = with(a, "1");
  const Run rb = with(b, "3");
  REQUIRE(ra.code == cli::kOk);
  REQUIRE(rb.code == cli::kOk);
  auto strip = [](std::string s, const std::string& dir) {
    for (std::size_t p; (p = s.find(dir)) != std::string::npos;) s.erase(p, dir.size());
    return s;
  };
  CHECK(strip(ra.out, a.path.string()) == strip(rb.out, b.path.string()));
  CHECK(read_solution(a / "s_001.json").path == read_solution(b / "s_001.json").path);

  // one trial is the solve command with that seed
  TempDir c("hypchoreo_cli_search_c");
  const Run single = run({"search", "--n", "3", "--R", "1.5", "--K", "12", "--K2", "24", "--trials",
                          "1", "--rng", "7", "--out-dir", c.path.string(), "--prefix", "s"});
  const Run solved = run({"solve", "--n", "3", "--R", "1.5", "--K", "12", "--K2", "24", "--seed", "7",
                          "--out", c / "direct.json"});
  if (single.code == cli::kOk) {
    REQUIRE(solved.code == cli::kOk);
    CHECK(read_solution(c / "s_001.json").path == read_solution(c / "direct.json").path);
  } else {
    CHECK(solved.code != cli::kOk);
  }
}

}
