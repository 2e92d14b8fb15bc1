#pragma once

#include <stdexcept>
#include <string>

namespace sostensor {

// Malformed text input. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Operation requires an even order (SOS, PSD and H-eigenvalue machinery).
class OddOrderError : public std::domain_error {
 public:
  explicit OddOrderError(const std::string& what) : std::domain_error(what) {}
};

// Iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sostensor
