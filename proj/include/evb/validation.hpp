#pragma once

#include <string>
#include <vector>

namespace evb {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool gating = true; ///< informational checks are reported but never fail the run
  std::string note;
};

struct ValidationOptions {
  bool quick = false;
  /// Debug fault: the closed-form side of the quadrature oracle sees Delta * 1.01.
  bool inject_fault = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool all_passed() const;
};

/// Runs the oracle and invariant suite. Deterministic: no random sampling.
ValidationReport run_validation(const ValidationOptions& opts);

} // namespace evb
