#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ampsim {

struct AcceptanceOptions {
  /// Test hook: perturbs one Ming block entry by 0.1 before the exponential
  /// check, which must make A2 fail and leave the rest untouched.
  bool corrupt_ming_block = false;
  /// Criterion ids to run; empty runs all of them.
  std::vector<std::string> only;
  std::uint64_t seed = 42;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  /// Measured values against their thresholds.
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// Runs the acceptance criteria A1..A8 in order. Each criterion also fails
/// if it exceeds its runtime budget.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// One line per criterion: "A1 PASS  1.23s/10s  title :: detail".
std::string format_result(const CriterionResult& r);

}  // namespace ampsim
