#pragma once

#include <stdexcept>
#include <string>

namespace qiopa {

/// Parameters outside the mathematical domain of a formula (non-finite input,
/// divergent Gaussian integral, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A request the closed-form path does not cover (seed order, basis, ...).
struct UnsupportedInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Truncated Fock space too small for the requested tail bound.
struct TruncationError : std::runtime_error {
  TruncationError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_deficit(achieved) {}
  double achieved_deficit;
};

/// Density matrix failed a validity check (negative spectrum, bad trace).
struct InvalidState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// O-Filter projection annihilated the state.
struct DegenerateFilter : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qiopa
