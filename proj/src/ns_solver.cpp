#include "divfree/ns_solver.hpp"

#include <algorithm>
#include <numbers>

#include "divfree/errors.hpp"
#include "divfree/fft.hpp"
#include "divfree/kernels.hpp"

namespace divfree {

void SolverConfig::validate() const {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (snapshots < 1) throw InvalidArgument("snapshots must be >= 1");
  if (!std::isfinite(forcing_amplitude) || !std::isfinite(forcing_phase))
    throw InvalidArgument("forcing parameters must be finite");
  init.validate();
}

ScalarField forcing_field(const SolverConfig& config) {
  const double two_pi_over_l = 2.0 * std::numbers::pi / config.grid.length();
  return ScalarField::from_function(config.grid, [&](double x, double y) {
    return config.forcing_amplitude * std::sin(two_pi_over_l * (x + y) + config.forcing_phase);
  });
}

namespace {

double wave_scale(const Grid& grid) { return 2.0 * std::numbers::pi / grid.length(); }

// Packs (d psi/dy, -d psi/dx) into one Hermitian-pair buffer u_hat + i v_hat.
// The inverse transform then yields u + i v.
std::vector<Complex> packed_velocity(const SpectralField& omega_hat) {
  const Grid& grid = omega_hat.grid();
  const double s = wave_scale(grid);
  std::vector<Complex> packed(grid.size());
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = odd_wavenumber(WavenumberTable::wavenumber(iy, grid.ny()), grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = odd_wavenumber(WavenumberTable::wavenumber(ix, grid.nx()), grid.nx());
      const auto i = grid.index(ix, iy);
      if (kx == 0 && ky == 0) continue;
      const Complex psi = omega_hat.coeffs()[i] / (s * s * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky));
      const Complex u_hat = Complex(0.0, s * ky) * psi;
      const Complex v_hat = Complex(0.0, -s * kx) * psi;
      packed[i] = u_hat + Complex(0.0, 1.0) * v_hat;
    }
  }
  return packed;
}

}  // namespace

VectorField2 velocity_from_vorticity(const SpectralField& omega_hat) {
  const Grid& grid = omega_hat.grid();
  const double s = wave_scale(grid);
  SpectralVector hat{SpectralField(grid), SpectralField(grid)};
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = odd_wavenumber(WavenumberTable::wavenumber(iy, grid.ny()), grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = odd_wavenumber(WavenumberTable::wavenumber(ix, grid.nx()), grid.nx());
      if (kx == 0 && ky == 0) continue;
      const auto i = grid.index(ix, iy);
      const Complex psi = omega_hat.coeffs()[i] / (s * s * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky));
      hat.u.coeffs()[i] = Complex(0.0, s * ky) * psi;
      hat.v.coeffs()[i] = Complex(0.0, -s * kx) * psi;
    }
  }
  return inverse_fft2(hat);
}

VectorField2 velocity_from_vorticity(const ScalarField& omega) {
  return velocity_from_vorticity(forward_fft2(omega));
}

VorticityStepper::VorticityStepper(const SolverConfig& config) : VorticityStepper(config, Options{}) {}

VorticityStepper::VorticityStepper(const SolverConfig& config, Options options)
    : config_(config), options_(options), forcing_hat_(forward_fft2(forcing_field(config))) {
  config_.validate();
  forcing_hat_.coeffs()[0] = 0.0;
}

double VorticityStepper::cfl(const SpectralField& omega_hat) const {
  const Grid& grid = config_.grid;
  auto packed = packed_velocity(omega_hat);
  fft_detail::backward_inplace(grid, packed);
  const double scale = 1.0 / static_cast<double>(grid.size());
  double umax = 0.0;
  double vmax = 0.0;
  for (const auto& c : packed) {
    umax = std::max(umax, std::abs(c.real()) * scale);
    vmax = std::max(vmax, std::abs(c.imag()) * scale);
  }
  return std::max(umax / grid.hx(), vmax / grid.hy()) * config_.dt;
}

SpectralField VorticityStepper::step(const SpectralField& omega_hat, std::size_t step_index) const {
  const Grid& grid = config_.grid;
  const std::size_t n = grid.size();
  const double scale = 1.0 / static_cast<double>(n);
  const double s = wave_scale(grid);

  std::vector<Complex> rhs(forcing_hat_.coeffs().begin(), forcing_hat_.coeffs().end());

  if (options_.nonlinear) {
    auto velocity = packed_velocity(omega_hat);
    std::vector<Complex> grad(n);
    for (int iy = 0; iy < grid.ny(); ++iy) {
      const int ky = odd_wavenumber(WavenumberTable::wavenumber(iy, grid.ny()), grid.ny());
      for (int ix = 0; ix < grid.nx(); ++ix) {
        const int kx = odd_wavenumber(WavenumberTable::wavenumber(ix, grid.nx()), grid.nx());
        const auto i = grid.index(ix, iy);
        const Complex w = omega_hat.coeffs()[i];
        grad[i] = Complex(0.0, s * kx) * w + Complex(0.0, 1.0) * (Complex(0.0, s * ky) * w);
      }
    }
    fft_detail::backward_inplace(grid, velocity);
    fft_detail::backward_inplace(grid, grad);

    std::vector<double> u(n), v(n), wx(n), wy(n), adv(n);
    double umax = 0.0;
    double vmax = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = velocity[i].real() * scale;
      v[i] = velocity[i].imag() * scale;
      wx[i] = grad[i].real() * scale;
      wy[i] = grad[i].imag() * scale;
      umax = std::max(umax, std::abs(u[i]));
      vmax = std::max(vmax, std::abs(v[i]));
      finite = finite && std::isfinite(u[i]) && std::isfinite(v[i]);
    }
    const double courant = std::max(umax / grid.hx(), vmax / grid.hy()) * config_.dt;
    if (!finite || !(courant <= 1.0)) throw UnstableStep(step_index, finite ? courant : INFINITY);

    kernels::omp::advection(u, v, wx, wy, adv);
    std::vector<Complex> adv_hat(adv.begin(), adv.end());
    fft_detail::forward_inplace(grid, adv_hat);
    kernels::omp::dealias(grid, adv_hat);
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= adv_hat[i];
  }

  SpectralField next(grid);
  kernels::omp::crank_nicolson(grid, config_.nu, config_.dt, omega_hat.coeffs(), rhs, next.coeffs());
  next.coeffs()[0] = 0.0;
  for (const auto& c : next.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw UnstableStep(step_index, INFINITY);
  return next;
}

SpectralField step_vorticity(const SpectralField& omega_hat, const SolverConfig& config) {
  return VorticityStepper(config).step(omega_hat);
}

ScalarField initial_vorticity(const SolverConfig& config) {
  GrfSpec spec = config.init;
  spec.seed = config.seed;
  return sample_grf_scalar(spec, config.grid);
}

Trajectory simulate_from(const SolverConfig& config, const ScalarField& omega0) {
  config.validate();
  if (!(omega0.grid() == config.grid)) throw InvalidArgument("initial vorticity grid does not match config");
  const VorticityStepper stepper(config);
  SpectralField omega_hat = forward_fft2(omega0);
  omega_hat.coeffs()[0] = 0.0;

  Trajectory traj{config, {}, {}};
  traj.frames.reserve(config.snapshots);
  traj.frames.push_back(velocity_from_vorticity(omega_hat));
  traj.times.push_back(0.0);
  std::size_t step = 0;
  for (int snap = 1; snap < config.snapshots; ++snap) {
    for (int k = 0; k < config.record_every; ++k) omega_hat = stepper.step(omega_hat, ++step);
    traj.frames.push_back(velocity_from_vorticity(omega_hat));
    traj.times.push_back(static_cast<double>(snap) * config.record_every * config.dt);
  }
  return traj;
}

Trajectory simulate(const SolverConfig& config) {
  config.validate();
  return simulate_from(config, initial_vorticity(config));
}

}  // namespace divfree
