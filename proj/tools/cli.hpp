#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error,
// 2 non-convergence or failed verification, 3 infeasible seed,
// 4 file error.

#include <iosfwd>
#include <string>

#include "hypchoreo/choreography.hpp"

namespace hypchoreo::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNotConverged = 2,
  kInfeasible = 3,
  kFileError = 4,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Two-column table of both phases, one row per diagnostic.
std::string format_report(const SolveReport& report);

}  // namespace hypchoreo::cli
