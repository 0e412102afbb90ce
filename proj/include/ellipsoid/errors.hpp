#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ellipsoid {

/// Caller broke a precondition: wrong dimensions, non-positive radius, and so on.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that must be positive definite failed Cholesky certification.
class not_pd_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The cut's quadratic form a'Ka fell to or below the floor, so its square root is meaningless.
class degenerate_cut_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The updated shape matrix is no longer positive definite.
class pd_lost_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the solver when the engine breaks down; carries the iteration at which it happened.
class numerical_breakdown : public std::runtime_error {
 public:
  numerical_breakdown(std::size_t iteration, const std::string& reason)
      : std::runtime_error("numerical breakdown at iteration " + std::to_string(iteration) + ": " +
                           reason),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Malformed problem text. Line and column are 1-based.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed problem text whose content violates the schema (missing keys, wrong lengths).
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ellipsoid
