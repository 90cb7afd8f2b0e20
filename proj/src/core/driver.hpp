#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace pwe {

// Experiment orchestration. A request is a one-section config document whose
// section name picks the experiment (axioms, estimate, rates, gaps,
// density-approx, report); keys mirror the CLI flags. The result carries the
// process exit code (0 pass, 1 violated assertion, 3 inconclusive-only),
// human-readable text, and any file artifacts (CSV, SVG, reports) to be
// persisted by the caller. Usage and config problems throw; they map to
// exit code 2 at the CLI.
struct DriverArtifact {
  std::string name;
  std::string content;
};

struct DriverResult {
  int exit_code = 0;
  std::string text;
  std::vector<DriverArtifact> artifacts;
};

DriverResult run_request(const ConfigDoc& request);

}  // namespace pwe
