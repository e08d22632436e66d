#include "divfree/ode.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "divfree/errors.hpp"

namespace divfree {

void OdeSolveSpec::validate() const {
  if (method == OdeMethod::rk4_fixed && steps < 1) throw InvalidArgument("rk4 steps must be >= 1");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw InvalidArgument("ODE tolerances must be positive");
  if (!(min_step > 0.0)) throw InvalidArgument("min_step must be positive");
  if (!(max_step > min_step)) throw InvalidArgument("max_step must exceed min_step");
}

namespace {

using State = std::vector<double>;

State flatten(const VectorField2& w) {
  State s;
  s.reserve(2 * w.grid().size());
  s.insert(s.end(), w.u().values().begin(), w.u().values().end());
  s.insert(s.end(), w.v().values().begin(), w.v().values().end());
  return s;
}

VectorField2 unflatten(const Grid& grid, const State& s) {
  const auto n = grid.size();
  return {ScalarField(grid, State(s.begin(), s.begin() + n)), ScalarField(grid, State(s.begin() + n, s.end()))};
}

bool finite(const State& s) {
  return std::ranges::all_of(s, [](double x) { return std::isfinite(x); });
}

class Rhs {
 public:
  Rhs(const VectorFieldFn& model, const Grid& grid, const Condition& condition)
      : model_(model), grid_(grid), condition_(condition) {}

  State operator()(const State& x, double tau) {
    ++evaluations;
    VectorField2 out = model_(unflatten(grid_, x), tau, condition_);
    if (!(out.grid() == grid_)) throw InvalidArgument("model output grid differs from state grid");
    return flatten(out);
  }

  std::size_t evaluations = 0;

 private:
  const VectorFieldFn& model_;
  Grid grid_;
  const Condition& condition_;
};

// y + h * sum_j a_j k_j
State combine(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (const auto& [a, k] : terms) acc += a * (*k)[i];
    out[i] += h * acc;
  }
  return out;
}

OdeResult integrate_rk4(Rhs& f, const Grid& grid, State y, const OdeSolveSpec& spec, const StepObserver& observer) {
  const double h = 1.0 / spec.steps;
  for (int n = 0; n < spec.steps; ++n) {
    const double tau = n * h;
    const State k1 = f(y, tau);
    const State k2 = f(combine(y, h, {{0.5, &k1}}), tau + 0.5 * h);
    const State k3 = f(combine(y, h, {{0.5, &k2}}), tau + 0.5 * h);
    const State k4 = f(combine(y, h, {{1.0, &k3}}), tau + h);
    y = combine(y, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
    const double next = (n + 1 == spec.steps) ? 1.0 : (n + 1) * h;
    if (!finite(y)) throw NonFiniteState(next);
    if (observer) observer(next, unflatten(grid, y));
  }
  OdeResult result{unflatten(grid, y)};
  result.evaluations = f.evaluations;
  result.accepted = static_cast<std::size_t>(spec.steps);
  return result;
}

double rms_norm(const State& v, const State& scale) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = v[i] / scale[i];
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double initial_step(Rhs& f, const State& y0, const State& f0, const OdeSolveSpec& spec) {
  State scale(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i) scale[i] = spec.abs_tol + spec.rel_tol * std::abs(y0[i]);
  const double d0 = rms_norm(y0, scale);
  const double d1 = rms_norm(f0, scale);
  const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  const State y1 = combine(y0, h0, {{1.0, &f0}});
  const State f1 = f(y1, h0);
  State diff(y0.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f1[i] - f0[i];
  const double d2 = rms_norm(diff, scale) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, 1.0});
}

OdeResult integrate_dopri5(Rhs& f, const Grid& grid, State y, const OdeSolveSpec& spec,
                           const StepObserver& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0;

  OdeResult result{unflatten(grid, y)};
  double tau = 0.0;
  State k1 = f(y, tau);
  if (!finite(k1)) throw NonFiniteState(tau);
  double h = std::min(initial_step(f, y, k1, spec), spec.max_step);
  bool last_rejected = false;

  while (tau < 1.0) {
    if (h < spec.min_step) throw StepUnderflow(tau, h);
    const bool final_step = tau + h >= 1.0;
    if (final_step) h = 1.0 - tau;

    const State k2 = f(combine(y, h, {{a21, &k1}}), tau + c2 * h);
    const State k3 = f(combine(y, h, {{a31, &k1}, {a32, &k2}}), tau + c3 * h);
    const State k4 = f(combine(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), tau + c4 * h);
    const State k5 = f(combine(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), tau + c5 * h);
    const State k6 = f(combine(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), tau + h);
    State y_new = combine(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const double tau_new = final_step ? 1.0 : tau + h;
    const State k7 = f(y_new, tau_new);

    State err(y.size());
    State scale(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      scale[i] = spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    }
    const double err_norm = rms_norm(err, scale);

    if (std::isfinite(err_norm) && err_norm <= 1.0) {
      if (!finite(y_new) || !finite(k7)) throw NonFiniteState(tau_new);
      y = std::move(y_new);
      k1 = k7;
      tau = tau_new;
      ++result.accepted;
      if (observer) observer(tau, unflatten(grid, y));
      double factor = err_norm == 0.0 ? fac_max : safety * std::pow(err_norm, -0.2);
      factor = std::clamp(factor, fac_min, last_rejected ? 1.0 : fac_max);
      h = std::min(h * factor, spec.max_step);
      last_rejected = false;
    } else {
      ++result.rejected;
      const double factor = std::isfinite(err_norm) ? std::max(fac_min, safety * std::pow(err_norm, -0.2)) : fac_min;
      h *= factor;
      last_rejected = true;
    }
  }
  result.state = unflatten(grid, y);
  result.evaluations = f.evaluations;
  return result;
}

}  // namespace

OdeResult ode_integrate(const VectorFieldFn& model, const VectorField2& x0, const OdeSolveSpec& spec,
                        const Condition& condition, const StepObserver& observer) {
  spec.validate();
  if (!all_finite(x0)) throw NonFiniteState(0.0);
  Rhs f(model, x0.grid(), condition);
  if (spec.method == OdeMethod::rk4_fixed) return integrate_rk4(f, x0.grid(), flatten(x0), spec, observer);
  return integrate_dopri5(f, x0.grid(), flatten(x0), spec, observer);
}

}  // namespace divfree
