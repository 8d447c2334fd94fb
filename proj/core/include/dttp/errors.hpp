#pragma once

#include <stdexcept>
#include <string>

namespace dttp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated data invariant (bad tour, overweight plan, id out of range, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (magnitude rounds to zero, bad rates, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Instance exceeds the exact-DP budget (or has non-integral weights);
/// callers fall back to the greedy knapsack.
class DpBudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  explicit ParseError(const std::string& msg) : ParseError(msg, 0) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

}  // namespace dttp
