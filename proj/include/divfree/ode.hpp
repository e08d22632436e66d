#pragma once

#include <any>
#include <cstddef>
#include <functional>

#include "divfree/field.hpp"

namespace divfree {

using Condition = std::any;

/// Velocity model v(x, tau; condition). Output must live on x's grid.
using VectorFieldFn = std::function<VectorField2(const VectorField2&, double, const Condition&)>;

enum class OdeMethod { rk4_fixed, dormand_prince_adaptive };

struct OdeSolveSpec {
  OdeMethod method = OdeMethod::dormand_prince_adaptive;
  int steps = 50;          // rk4_fixed
  double abs_tol = 1e-5;   // dormand_prince_adaptive
  double rel_tol = 1e-5;
  double min_step = 1e-12;
  /// Step cap for the adaptive method. 1/8 means at least eight steps, about
  /// 50 model evaluations per solve.
  double max_step = 0.125;

  void validate() const;
};

struct OdeResult {
  VectorField2 state;
  std::size_t evaluations = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Called after every accepted step with the new tau and state.
using StepObserver = std::function<void(double, const VectorField2&)>;

/// Integrates dx/dtau = model(x, tau) from tau = 0 to 1. The adaptive method
/// is Dormand-Prince 5(4) with local extrapolation, RMS error norm against
/// abs_tol + rel_tol * max(|x|, |x_new|), and step rejection. Throws
/// StepUnderflow when the step falls below min_step and NonFiniteState when
/// the state or an accepted derivative is not finite.
OdeResult ode_integrate(const VectorFieldFn& model, const VectorField2& x0, const OdeSolveSpec& spec,
                        const Condition& condition = {}, const StepObserver& observer = {});

}  // namespace divfree
