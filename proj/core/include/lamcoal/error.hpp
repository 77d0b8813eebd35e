#pragma once

#include <stdexcept>
#include <string>

namespace lamcoal {

// Process exit codes used by the command line tool.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  hypothesis = 2,
  numerical = 3,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::usage; }
};

// Malformed model specs, out-of-range arguments, bad config files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A hypothesis of a limit law is definitively violated (e.g. dust present).
class HypothesisError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::hypothesis; }
};

// Quadrature did not converge, non-finite rates, failed consistency checks.
class NumericalError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
};

}  // namespace lamcoal
