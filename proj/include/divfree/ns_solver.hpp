#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "divfree/field.hpp"
#include "divfree/noise.hpp"

namespace divfree {

/// Pseudo-spectral vorticity-streamfunction solver settings. Defaults are
/// the 64x64, Re = 1000 dataset recipe: 50 snapshots, one per time unit.
struct SolverConfig {
  double nu = 1e-3;
  double dt = 1e-3;
  int record_every = 1000;
  int snapshots = 50;
  double forcing_amplitude = 0.1 * std::sqrt(2.0);
  double forcing_phase = 0.0;
  Grid grid{64};
  /// Seeds the initial vorticity; init.seed is ignored.
  std::uint64_t seed = 0;
  GrfSpec init;

  void validate() const;
};

struct Trajectory {
  SolverConfig config;
  std::vector<VectorField2> frames;
  std::vector<double> times;
};

/// amplitude * sin(2 pi (x + y) / L + phase), added to the vorticity equation.
ScalarField forcing_field(const SolverConfig& config);

/// psi = omega / (4 pi^2 |k|^2), u = d psi/dy, v = -d psi/dx.
VectorField2 velocity_from_vorticity(const ScalarField& omega);
VectorField2 velocity_from_vorticity(const SpectralField& omega_hat);

/// One Crank-Nicolson / explicit-advection step
///   (1 + a) w(n+1) = (1 - a) w(n) + dt (f - dealias(u . grad w))(n),
///   a = nu k^2 dt / 2.
/// Precomputes the forcing transform so repeated steps are cheap.
class VorticityStepper {
 public:
  struct Options {
    bool nonlinear = true;  // false drops u . grad w (linear test path)
  };

  explicit VorticityStepper(const SolverConfig& config);
  VorticityStepper(const SolverConfig& config, Options options);

  /// Throws UnstableStep(step_index) when max|u| dt / h > 1 or the state is
  /// not finite.
  SpectralField step(const SpectralField& omega_hat, std::size_t step_index = 1) const;

  /// CFL number max(|u|/h_x, |v|/h_y) dt of the given state.
  double cfl(const SpectralField& omega_hat) const;

 private:
  SolverConfig config_;
  Options options_;
  SpectralField forcing_hat_;
};

SpectralField step_vorticity(const SpectralField& omega_hat, const SolverConfig& config);

/// Initial vorticity from config.init with seed config.seed, zero mean.
ScalarField initial_vorticity(const SolverConfig& config);

Trajectory simulate(const SolverConfig& config);
Trajectory simulate_from(const SolverConfig& config, const ScalarField& omega0);

}  // namespace divfree
