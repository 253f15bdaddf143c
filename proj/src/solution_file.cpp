#include "hypchoreo/solution_file.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace hypchoreo {

namespace {

using nlohmann::json;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

json phase_json(const std::optional<PhaseReport>& p) {
  if (!p) return nullptr;
  return json{{"action", number(p->action)},
              {"coefficient_count", p->coefficient_count},
              {"wall_time_seconds", number(p->wall_time_seconds)},
              {"iterations", p->iterations},
              {"gradient_rel_norm", number(p->gradient_rel_norm)},
              {"smallest_coefficient", number(p->smallest_coefficient)},
              {"residual_rel_norm", number(p->residual_rel_norm)},
              {"converged", p->converged}};
}

std::optional<PhaseReport> read_phase(const json& j) {
  if (j.is_null()) return std::nullopt;
  PhaseReport p;
  p.action = read_number(j.at("action"));
  p.coefficient_count = j.at("coefficient_count").get<int>();
  p.wall_time_seconds = read_number(j.at("wall_time_seconds"));
  p.iterations = j.at("iterations").get<int>();
  p.gradient_rel_norm = read_number(j.at("gradient_rel_norm"));
  p.smallest_coefficient = read_number(j.at("smallest_coefficient"));
  p.residual_rel_norm = read_number(j.at("residual_rel_norm"));
  p.converged = j.at("converged").get<bool>();
  return p;
}

}  // namespace

std::string to_json(const Choreography& choreo) {
  const Configuration& c = choreo.config;
  json config{{"n", c.n}, {"omega", c.omega}, {"K", choreo.path.bandwidth()}};
  config["R"] = c.planar() ? json("planar") : json(c.R());
  json coeffs = json::array();
  for (const cplx& z : choreo.path.coeffs()) coeffs.push_back(json::array({z.real(), z.imag()}));
  json diagnostics{{"phase1", phase_json(choreo.report.phase1)},
                   {"phase2", phase_json(choreo.report.phase2)},
                   {"failure", choreo.report.failure}};
  json doc{{"format_version", kSolutionFormatVersion},
           {"config", config},
           {"coeffs", coeffs},
           {"diagnostics", diagnostics}};
  return doc.dump(2) + "\n";
}

Choreography from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const int version = doc.at("format_version").get<int>();
    if (version != kSolutionFormatVersion) {
      throw FileError("unsupported format_version " + std::to_string(version));
    }
    const json& cj = doc.at("config");
    const int n = cj.at("n").get<int>();
    const double omega = cj.at("omega").get<double>();
    const int K = cj.at("K").get<int>();
    const json& rj = cj.at("R");
    Choreography out;
    if (rj.is_string()) {
      if (rj.get<std::string>() != "planar") throw FileError("R must be a number or \"planar\"");
      out.config = Configuration::planar_problem(n, omega, K);
    } else {
      out.config = Configuration::hyperbolic(n, rj.get<double>(), omega, K);
    }
    out.config.validate();
    const json& coeffs = doc.at("coeffs");
    if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(2 * K + 1)) {
      throw FileError("coeffs must hold 2K+1 entries");
    }
    std::vector<cplx> c;
    c.reserve(coeffs.size());
    for (const json& pair : coeffs) {
      if (!pair.is_array() || pair.size() != 2) throw FileError("each coefficient is [re, im]");
      const double re = pair[0].get<double>();
      const double im = pair[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw FileError("non-finite coefficient");
      c.emplace_back(re, im);
    }
    out.path = TrigPath(std::move(c));
    if (doc.contains("diagnostics")) {
      const json& d = doc.at("diagnostics");
      out.report.phase1 = read_phase(d.value("phase1", json(nullptr)));
      out.report.phase2 = read_phase(d.value("phase2", json(nullptr)));
      out.report.failure = d.value("failure", std::string{});
    }
    return out;
  } catch (const json::exception& e) {
    throw FileError(std::string("malformed solution file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FileError(std::string("invalid configuration: ") + e.what());
  }
}

void write_solution(const std::filesystem::path& path, const Choreography& choreo) {
  const std::string text = to_json(choreo);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw FileError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FileError("cannot rename onto " + path.string());
  }
}

Choreography read_solution(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError("cannot read " + path.string());
  return from_json(ss.str());
}

}  // namespace hypchoreo
