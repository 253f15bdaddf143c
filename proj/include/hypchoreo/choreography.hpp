#pragma once

#include <optional>
#include <string>

#include "hypchoreo/action.hpp"
#include "hypchoreo/trigpath.hpp"

namespace hypchoreo {

/// Diagnostics of one optimization phase.
struct PhaseReport {
  double action = 0.0;
  int coefficient_count = 0;
  double wall_time_seconds = 0.0;
  int iterations = 0;
  double gradient_rel_norm = 0.0;
  double smallest_coefficient = 0.0;
  double residual_rel_norm = 0.0;
  bool converged = false;
};

struct SolveReport {
  std::optional<PhaseReport> phase1;
  std::optional<PhaseReport> phase2;
  /// Empty on success.
  std::string failure;

  bool ok() const noexcept { return failure.empty(); }
  /// The last phase that ran.
  const PhaseReport* final_phase() const noexcept;
};

struct Choreography {
  Configuration config;
  TrigPath path;
  SolveReport report;
};

}  // namespace hypchoreo
