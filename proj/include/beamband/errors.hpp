#pragma once

#include <stdexcept>
#include <string>

namespace beamband {

// Caller broke a documented precondition (empty sets, zero totals, k out of range).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric argument lies outside the domain the operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Tree shape does not match the layer layout.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Two pieces of state that must agree do not (feedback vs. swept set, trace lengths).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace beamband
