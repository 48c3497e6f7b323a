#pragma once

// Randomized property suites behind `alpha_proc validate`.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace alpha_procrustes::validation {

struct Tolerances {
  double bw_relative = 1e-10;
  double triangle_slack = 1e-9;
  double alt_commuting_relative = 1e-10;
  double alt_noncommuting_gap = 1e-6;
  double log_limit_relative = 1e-3;
  double lyapunov_residual = 1e-9;
  double geodesic_endpoint = 1e-9;
  double geodesic_length_relative = 5e-3;

  /// Negative tolerances that no check can meet. Harness self-test.
  static Tolerances broken();
};

struct ValidationConfig {
  std::uint64_t seed = 20240611;
  int trials = 50;
  Tolerances tolerances;
};

struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::string witness;  // first failing input, empty on success

  bool passed() const { return failures == 0; }
};

struct ValidationReport {
  std::vector<SuiteResult> suites;

  bool passed() const;
};

/// Throws DomainError when trials < 1.
ValidationReport run_validation(const ValidationConfig& cfg);

/// Fixed-width pass/fail table followed by the witnesses of failing suites.
void print_report(std::ostream& out, const ValidationReport& report);

}  // namespace alpha_procrustes::validation
