#pragma once

#include <span>
#include <vector>

#include "divfree/field.hpp"
#include "divfree/noise.hpp"
#include "divfree/ode.hpp"

namespace divfree {

enum class PathKind { linear, affine_sigma };

/// linear:       u_tau = (1 - tau) u0 + tau y
/// affine_sigma: u_tau = sigma_tau u0 + tau y, sigma_tau = 1 - (1 - sigma_min) tau,
///               sigma_min in (0, 1]; sigma_min = 1 is the pure translation path.
struct PathSpec {
  PathKind kind = PathKind::affine_sigma;
  double sigma_min = 1e-4;

  void validate() const;
  /// Coefficient on u0 at tau (1 - tau for the linear path).
  double sigma(double tau) const;
  /// sigma_min, or 0 for the linear path.
  double effective_sigma_min() const;
};

VectorField2 interpolate(const PathSpec& spec, const VectorField2& u0, const VectorField2& y, double tau);

/// Linear-path target velocity y - u0.
VectorField2 conditional_velocity(const VectorField2& u0, const VectorField2& y);

/// Velocity at state x of the conditional path toward y:
/// (y - (1 - sigma_min) x) / sigma_tau. For the linear path sigma_min = 0,
/// which reduces to (y - x) / (1 - tau). Throws when sigma_tau = 0.
VectorField2 conditional_velocity(const PathSpec& spec, const VectorField2& x, const VectorField2& y, double tau);

struct FmPair {
  VectorField2 u0;
  VectorField2 y;
  double tau;
  Condition condition;
};

/// Mean over pairs of |P model(u_tau, tau; c) - d/dtau u_tau|^2 in L2, with
/// P the Leray projector. Warns when u0 or y leave the solenoidal subspace.
/// Pairs are evaluated concurrently, so `model` must be safe to call from
/// several threads.
double fm_loss(const VectorFieldFn& model, const PathSpec& spec, std::span<const FmPair> pairs);

struct WeightedField {
  VectorField2 field;
  double weight;
};

/// Posterior weights w_j(x) proportional to weight_j N(x; tau y_j, sigma_tau^2 C_u),
/// evaluated in the solenoidal Fourier coordinates where C_u is diagonal.
std::vector<double> marginal_posterior_weights(const PathSpec& spec, std::span<const WeightedField> data,
                                               const VectorField2& x, double tau,
                                               const StreamNoiseSpec& noise);

/// Marginal field sum_j w_j(x) v_tau^{y_j}(x) for an empirical data measure
/// and the spectral-mode noise prior. Grids above 16x16 are rejected; data
/// with mass outside the prior's support make the density ratio ill-posed and
/// are rejected too.
VectorField2 marginal_velocity_finite(const PathSpec& spec, std::span<const WeightedField> data,
                                      const VectorField2& x, double tau, const StreamNoiseSpec& noise);

/// Model composed with the Leray projector.
VectorFieldFn projected(VectorFieldFn model);

struct GeneratedSample {
  VectorField2 initial;
  OdeResult solve;
};

/// Draws x0 (frame `frame` of the noise seed) and integrates the projected model.
GeneratedSample generate_sample(const VectorFieldFn& model, const StreamNoiseSpec& noise, const Grid& grid,
                                const OdeSolveSpec& ode, const Condition& condition = {},
                                std::uint64_t frame = 0, const StepObserver& observer = {});

}  // namespace divfree
