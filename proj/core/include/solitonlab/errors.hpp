#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace solitonlab {

// Compact "%g" rendering of a number for diagnostics.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Every error raised by the library derives from Error so that the CLI can
// map it onto a distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 10; }
};

// Argument outside the mathematical domain of an operation
// (non-normalizable Gaussian, q <= 0, mu >= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

// Caller violated a precondition that is not a domain restriction.
class UsageError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

// Malformed or invalid configuration. `line` is 0 when the problem is not
// tied to a particular line of the input.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }
  int exit_code() const noexcept override { return 3; }

 private:
  int line_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }
  int exit_code() const noexcept override { return 5; }

 private:
  double best_residual_;
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 6; }
};

class NormDriftError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 7; }
};

class BoundaryLeakError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 8; }
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 9; }
};

// Broken internal invariant, e.g. a Hermitian form that came out complex.
class InternalError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 10; }
};

}  // namespace solitonlab
