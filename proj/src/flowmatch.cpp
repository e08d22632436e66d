#include "divfree/flowmatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divfree/errors.hpp"
#include "divfree/fft.hpp"
#include "divfree/hodge.hpp"
#include "divfree/spectral.hpp"

namespace divfree {

void PathSpec::validate() const {
  if (kind == PathKind::affine_sigma && !(sigma_min > 0.0 && sigma_min <= 1.0))
    throw InvalidArgument("sigma_min must lie in (0, 1]");
}

double PathSpec::effective_sigma_min() const { return kind == PathKind::linear ? 0.0 : sigma_min; }

double PathSpec::sigma(double tau) const { return 1.0 - (1.0 - effective_sigma_min()) * tau; }

namespace {

void require_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("tau must lie in [0, 1], got " + std::to_string(tau));
}

double relative_divergence(const VectorField2& w) {
  const double norm = l2_norm(w);
  return norm > 0.0 ? l2_norm(divergence(w)) / norm : 0.0;
}

constexpr double solenoidal_warning_tolerance = 1e-8;

}  // namespace

VectorField2 interpolate(const PathSpec& spec, const VectorField2& u0, const VectorField2& y, double tau) {
  spec.validate();
  require_tau(tau);
  return axpby(spec.sigma(tau), u0, tau, y);
}

VectorField2 conditional_velocity(const VectorField2& u0, const VectorField2& y) { return y - u0; }

VectorField2 conditional_velocity(const PathSpec& spec, const VectorField2& x, const VectorField2& y, double tau) {
  spec.validate();
  require_tau(tau);
  const double sigma = spec.sigma(tau);
  if (!(sigma > 0.0)) throw InvalidArgument("conditional velocity undefined where sigma_tau = 0");
  return axpby(-(1.0 - spec.effective_sigma_min()) / sigma, x, 1.0 / sigma, y);
}

double fm_loss(const VectorFieldFn& model, const PathSpec& spec, std::span<const FmPair> pairs) {
  spec.validate();
  if (pairs.empty()) throw InvalidArgument("fm_loss needs a nonempty batch");
  for (const auto& p : pairs) {
    require_tau(p.tau);
    if (relative_divergence(p.u0) > solenoidal_warning_tolerance ||
        relative_divergence(p.y) > solenoidal_warning_tolerance)
      warn("fm_loss: batch contains fields outside the divergence-free subspace");
  }

  std::vector<double> residuals(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const FmPair& p = pairs[i];
    const VectorField2 x = axpby(spec.sigma(p.tau), p.u0, p.tau, p.y);
    // d/dtau (sigma_tau u0 + tau y)
    const VectorField2 target = axpby(-(1.0 - spec.effective_sigma_min()), p.u0, 1.0, p.y);
    const VectorField2 residual = leray_project(model(x, p.tau, p.condition)) - target;
    residuals[i] = l2_inner(residual, residual);
  }
  double total = 0.0;
  for (double r : residuals) total += r;
  return total / static_cast<double>(pairs.size());
}

namespace {

constexpr int max_marginal_grid = 16;
constexpr double excluded_variance = 1e-30;

// Coordinates of w along e(k) = (k_y, -k_x)/|k| per kept mode, in
// Fourier-series units (DFT / (n_x n_y)). Also returns the energy the
// coordinates miss.
struct SolenoidalCoords {
  std::vector<Complex> a;
  double missing = 0.0;
  double total = 0.0;
};

SolenoidalCoords solenoidal_coords(const VectorField2& w, const std::vector<double>& variance) {
  const Grid& grid = w.grid();
  const auto hat = forward_fft2(w);
  const double scale = 1.0 / static_cast<double>(grid.size());
  SolenoidalCoords out;
  out.a.assign(grid.size(), 0.0);
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = odd_wavenumber(WavenumberTable::wavenumber(iy, grid.ny()), grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = odd_wavenumber(WavenumberTable::wavenumber(ix, grid.nx()), grid.nx());
      const auto i = grid.index(ix, iy);
      const Complex cu = hat.u.coeffs()[i] * scale;
      const Complex cv = hat.v.coeffs()[i] * scale;
      const double energy = std::norm(cu) + std::norm(cv);
      out.total += energy;
      if (variance[i] <= excluded_variance) {
        out.missing += energy;
        continue;
      }
      const double norm_k = std::hypot(static_cast<double>(kx), static_cast<double>(ky));
      out.a[i] = (static_cast<double>(ky) * cu - static_cast<double>(kx) * cv) / norm_k;
      out.missing += energy - std::norm(out.a[i]);
    }
  }
  return out;
}

}  // namespace

std::vector<double> marginal_posterior_weights(const PathSpec& spec, std::span<const WeightedField> data,
                                               const VectorField2& x, double tau, const StreamNoiseSpec& noise) {
  spec.validate();
  require_tau(tau);
  const Grid& grid = x.grid();
  if (grid.nx() > max_marginal_grid || grid.ny() > max_marginal_grid)
    throw InvalidArgument("marginal_velocity_finite: grid larger than 16x16");
  if (data.empty()) throw InvalidArgument("marginal_velocity_finite: empty data measure");
  if (noise.mode != NoiseMode::spectral)
    throw InvalidArgument("marginal_velocity_finite: needs the spectral-mode noise prior");
  double weight_sum = 0.0;
  for (const auto& d : data) {
    if (!(d.field.grid() == grid)) throw InvalidArgument("marginal_velocity_finite: data grid mismatch");
    if (!(d.weight >= 0.0)) throw InvalidArgument("marginal_velocity_finite: negative data weight");
    weight_sum += d.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) throw InvalidArgument("marginal_velocity_finite: weights must sum to 1");

  const double sigma = spec.sigma(tau);
  if (!(sigma > 0.0)) throw NumericalError("marginal_velocity_finite: singular covariance at sigma_tau = 0");

  const auto variance = divfree_noise_mode_variance(noise, grid);
  const auto xc = solenoidal_coords(x, variance);

  std::vector<double> log_w(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto yc = solenoidal_coords(data[j].field, variance);
    if (yc.missing > 1e-12 * yc.total)
      throw NumericalError("marginal_velocity_finite: data point " + std::to_string(j) +
                           " has mass on a zero-variance coordinate; density ratio is ill-posed");
    double q = 0.0;
    for (std::size_t i = 0; i < variance.size(); ++i) {
      if (variance[i] <= excluded_variance) continue;
      q += std::norm(xc.a[i] - tau * yc.a[i]) / variance[i];
    }
    log_w[j] = (data[j].weight > 0.0 ? std::log(data[j].weight) : -INFINITY) - q / (2.0 * sigma * sigma);
  }
  const double top = *std::ranges::max_element(log_w);
  std::vector<double> w(data.size());
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) total += (w[j] = std::exp(log_w[j] - top));
  for (double& v : w) v /= total;
  return w;
}

VectorField2 marginal_velocity_finite(const PathSpec& spec, std::span<const WeightedField> data,
                                      const VectorField2& x, double tau, const StreamNoiseSpec& noise) {
  const auto w = marginal_posterior_weights(spec, data, x, tau, noise);
  if (data.size() == 1) return conditional_velocity(spec, x, data[0].field, tau);
  VectorField2 y_bar(x.grid());
  for (std::size_t j = 0; j < data.size(); ++j) y_bar = axpby(1.0, y_bar, w[j], data[j].field);
  return conditional_velocity(spec, x, y_bar, tau);
}

VectorFieldFn projected(VectorFieldFn model) {
  return [model = std::move(model)](const VectorField2& x, double tau, const Condition& c) {
    return leray_project(model(x, tau, c));
  };
}

GeneratedSample generate_sample(const VectorFieldFn& model, const StreamNoiseSpec& noise, const Grid& grid,
                                const OdeSolveSpec& ode, const Condition& condition, std::uint64_t frame,
                                const StepObserver& observer) {
  VectorField2 x0 = std::move(sample_divfree_noise(noise, grid, 1, frame).front());
  OdeResult solve = ode_integrate(projected(model), x0, ode, condition, observer);
  return {std::move(x0), std::move(solve)};
}

}  // namespace divfree
