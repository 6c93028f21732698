#pragma once

#include <stdexcept>
#include <string>

namespace fluxsim {

// Quadrature failed to meet its tolerance within the refinement budget.
// Carries the last two whole-integral estimates so the caller can see how
// far apart the levels still were.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double previous_estimate, double last_estimate)
      : std::runtime_error(what + " (previous estimate " + std::to_string(previous_estimate) +
                           ", last estimate " + std::to_string(last_estimate) + ")"),
        prev_(previous_estimate),
        last_(last_estimate) {}

  double previous_estimate() const { return prev_; }
  double last_estimate() const { return last_; }

 private:
  double prev_;
  double last_;
};

// Field evaluated at (or too close to) its source point.
class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario-config syntax or constraint violation. Message names the
// offending section.key and the constraint.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fluxsim
