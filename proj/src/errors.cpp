#include "divfree/errors.hpp"

#include <iostream>
#include <mutex>
#include <sstream>

namespace divfree {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

NotSolenoidal::NotSolenoidal(double relative_divergence, double tolerance)
    : InvalidArgument("field is not solenoidal: |div u|/|u| = " + format_double(relative_divergence) +
                      " exceeds " + format_double(tolerance)),
      relative_divergence_(relative_divergence) {}

UnstableStep::UnstableStep(std::size_t step, double cfl)
    : NumericalError("unstable step " + std::to_string(step) + ": CFL number " + format_double(cfl) +
                     " exceeds 1"),
      step_(step),
      cfl_(cfl) {}

StepUnderflow::StepUnderflow(double tau, double step)
    : NumericalError("adaptive step underflow at tau = " + format_double(tau) +
                     " (h = " + format_double(step) + ")") {}

NonFiniteState::NonFiniteState(double tau)
    : NumericalError("non-finite ODE state at tau = " + format_double(tau)) {}

FormatError::FormatError(std::size_t offset, const std::string& what)
    : InvalidArgument("malformed FLO1 file at byte offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  WarningHandler previous = std::move(handler_slot());
  handler_slot() = std::move(handler);
  return previous;
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (handler_slot()) handler_slot()(message);
}

}  // namespace divfree
