#pragma once

#include <stdexcept>
#include <string>

namespace centrifugal {

/// Input outside the documented range of a physical type or config key.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed configuration text.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Argument outside the domain supported by a special-function routine.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative solver did not reach its tolerance, or two seeds met the same root.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer than 90% of the points of a sweep could be evaluated.
class PartialSweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace centrifugal
