#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fluxsim/parallel.hpp"

// End-to-end acceptance checks, one per claim the library stands on. Each
// check pins its tolerance in code and reports a one-line verdict.

namespace fluxsim::acceptance {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs all checks in order; when progress is non-null each verdict line is
// printed as it lands.
std::vector<CheckResult> run_all(ExecPolicy policy = default_policy(),
                                 std::ostream* progress = nullptr);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace fluxsim::acceptance
