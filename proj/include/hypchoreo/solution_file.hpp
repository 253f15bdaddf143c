#pragma once

// JSON storage of choreographies and seeds.
//
//   { "format_version": 1,
//     "config": { "n": 3, "R": 1.5 or "planar", "omega": 0.0, "K": 52 },
//     "coeffs": [[re, im], ...],          // k = -K..K
//     "diagnostics": { "phase1": {...} or null, "phase2": ..., "failure": "" } }
//
// Seed files use the same layout; diagnostics may be omitted.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "hypchoreo/choreography.hpp"

namespace hypchoreo {

inline constexpr int kSolutionFormatVersion = 1;

/// Malformed, unreadable or unwritable solution file.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Doubles are written in shortest round-trip form, so reading back gives
/// bitwise-identical coefficients. Non-finite diagnostics are written as null.
std::string to_json(const Choreography& choreo);
Choreography from_json(const std::string& text);

/// Writes to a temporary file next to path, then renames it over path.
void write_solution(const std::filesystem::path& path, const Choreography& choreo);
Choreography read_solution(const std::filesystem::path& path);

}  // namespace hypchoreo
