#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace infoloss {

/// Malformed input: bad probabilities, symbols outside an alphabet,
/// mismatched alphabets, invalid ring tables.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration would exceed a configured cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
      : std::runtime_error(what + " (requested " + std::to_string(requested) +
                           ", cap " + std::to_string(cap) + ")"),
        requested_(requested),
        cap_(cap) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

/// Exact analysis requested on a system that only supports simulation.
class UnsupportedAnalysis : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An observed output cannot have been produced by the system being inverted.
class InconsistentObservation : public std::runtime_error {
 public:
  InconsistentObservation(const std::string& what, std::size_t index)
      : std::runtime_error(what + " at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative numerics failed to reach the requested accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A transfer-function zero sits on (or numerically at) the unit circle.
class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A yes/no question cannot be decided at working precision.
class IndeterminateError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A library-side invariant check failed; indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace infoloss
