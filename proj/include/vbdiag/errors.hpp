#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vbdiag {

/// Invalid model parameter (non-positive tau, alpha outside (0,1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the function's domain, e.g. a non-positive elevation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Under-determined or singular satellite geometry.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (empty trace, bad CSV row, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Threshold regression could not be fitted.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario or skyplot text that failed to parse. line() is 1-based, 0 when
/// the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace vbdiag
