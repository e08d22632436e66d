#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace divfree {

/// Base for every error raised by the library. Input and contract violations
/// derive from InvalidArgument; numerical breakdowns from NumericalError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A velocity field that was required to be divergence-free is not.
class NotSolenoidal : public InvalidArgument {
 public:
  NotSolenoidal(double relative_divergence, double tolerance);
  double relative_divergence() const noexcept { return relative_divergence_; }

 private:
  double relative_divergence_;
};

/// CFL guard tripped (or the state blew up) during time stepping.
class UnstableStep : public NumericalError {
 public:
  UnstableStep(std::size_t step, double cfl);
  std::size_t step() const noexcept { return step_; }
  double cfl() const noexcept { return cfl_; }

 private:
  std::size_t step_;
  double cfl_;
};

class StepUnderflow : public NumericalError {
 public:
  StepUnderflow(double tau, double step);
};

class NonFiniteState : public NumericalError {
 public:
  explicit NonFiniteState(double tau);
};

/// Malformed FLO1 input. offset is the byte position of the offending field.
class FormatError : public InvalidArgument {
 public:
  FormatError(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Warnings are advisory and never change results. The default handler writes
// to stderr; tests install a capturing handler.
using WarningHandler = std::function<void(std::string_view)>;
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace divfree
