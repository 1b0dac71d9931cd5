#pragma once

#include <stdexcept>
#include <string>

namespace hexnls {

/// Raised when a caller passes a parameter outside an operation's domain.
class InvalidParameter : public std::invalid_argument {
 public:
  explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when the input is valid in form but degenerate (zero mass, zero
/// denominator, ...), so the requested quantity is undefined.
class DegenerateInput : public std::domain_error {
 public:
  explicit DegenerateInput(const std::string& what) : std::domain_error(what) {}
};

/// Bisection was given a bracket whose endpoints do not straddle the flip.
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

/// A probe is narrower than the sampling can resolve.
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// An output file or directory could not be written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hexnls
