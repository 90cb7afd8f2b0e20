#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/solvers.hpp"

namespace pwe {

// Randomized property suite for the plain functionals: null value, p-power
// scaling under affine maps, smoothness under point insertion/deletion,
// subadditivity over the 2^d half-cells with a documented additive constant,
// and the growth bound. Each check draws a fresh instance; violations are
// counted, never tolerated.
struct AxiomResult {
  std::string axiom;
  Functional functional = Functional::MST;
  long checks = 0;
  long violations = 0;
  // slack remaining in the tightest check: min over checks of bound - value
  // (for equality axioms, tolerance - |error|); negative means a violation.
  double worst_margin = 0.0;
};

struct AxiomReport {
  std::vector<AxiomResult> results;
  long total_checks = 0;
  long total_violations = 0;

  bool ok() const { return total_violations == 0; }
};

struct AxiomOptions {
  long checks_per_axiom = 10000;
  int max_n = 12;
  int dim = 2;
  std::vector<double> p_list = {0.5, 1.0, 1.5};
};

AxiomReport run_axiom_suite(uint64_t seed, const AxiomOptions& opt);

// Boundary-dual properties: domination L* <= L, zero-slack superadditivity
// over the 2^d half-cells for the tree and matching duals, slack-allowed
// superadditivity for the tour dual. The zero-slack tour check is tracked as
// a diagnostic count only; failures there are reported, not violations.
struct DualPropertyReport {
  long domination_checks = 0;
  long domination_violations = 0;
  long superadd_checks = 0;
  long superadd_violations = 0;
  long tsp_slack_checks = 0;
  long tsp_slack_violations = 0;
  long tsp_zero_slack_failures = 0;  // diagnostic only
  double worst_margin = 0.0;

  bool ok() const {
    return domination_violations == 0 && superadd_violations == 0 &&
           tsp_slack_violations == 0;
  }
};

struct DualPropertyOptions {
  long checks = 10000;
  int max_n = 10;
  int max_n_tsp = 8;
  int dim = 2;
  std::vector<double> p_list = {0.5, 1.0, 1.5};
};

DualPropertyReport run_dual_properties(uint64_t seed, const DualPropertyOptions& opt);

std::string format_axiom_report(const AxiomReport& report);
std::string format_dual_report(const DualPropertyReport& report);

}  // namespace pwe
