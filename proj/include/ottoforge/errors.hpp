#pragma once

#include <stdexcept>
#include <string>

namespace ottoforge {

/// Precondition or argument violation.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The aggregate generator of a cycle is (near-)singular; no unique fast
/// steady state exists. The message names the connectivity diagnostic.
class DegenerateCycle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The period map has no unique fixed point.
class NoUniqueLimitCycle : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OptimizationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation called outside its domain of applicability (e.g. a positive-GAP
/// bound requested for mixed-sign weights).
class NotApplicable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ottoforge
