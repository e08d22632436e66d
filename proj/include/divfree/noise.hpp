#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "divfree/field.hpp"

namespace divfree {

/// Gaussian random field with Fourier-series coefficient variance
/// E|c(k)|^2 = A^2 (4 pi^2 |k|^2 / L^2 + tau^2)^(-alpha) for k != 0.
/// The mean and every Nyquist row/column are left at zero.
struct GrfSpec {
  double alpha = 2.5;
  double tau = 7.0;
  std::uint64_t seed = 0;
  /// A above; when empty the field is scaled to unit expected L2 norm.
  std::optional<double> amplitude;

  void validate() const;
};

enum class NoiseMode { spectral, finite_difference };

/// Divergence-free noise u = curl_perp(psi). Spectral mode draws psi from
/// `grf`; finite_difference mode blurs white noise with a periodic Gaussian
/// of width blur_sigma cells and differentiates with central differences.
/// Both modes draw from grf.seed.
struct StreamNoiseSpec {
  NoiseMode mode = NoiseMode::spectral;
  GrfSpec grf;
  double blur_sigma = 2.0;
  /// Expected L2 norm of each sample (default 1).
  std::optional<double> amplitude;

  void validate() const;
};

/// Expected |c(k)|^2 per grid index; zero on excluded modes.
std::vector<double> grf_mode_variance(const GrfSpec& spec, const Grid& grid);

/// Sample `frame` of the stream selected by spec.seed.
ScalarField sample_grf_scalar(const GrfSpec& spec, const Grid& grid, std::uint64_t frame = 0);

/// Spectral-mode noise covariance: E|e(k) . c_u(k)|^2 per grid index, where
/// e(k) = k_perp/|k| spans the solenoidal direction of mode k.
std::vector<double> divfree_noise_mode_variance(const StreamNoiseSpec& spec, const Grid& grid);

/// Frames first_frame .. first_frame + frames - 1 of the seed's stream.
std::vector<VectorField2> sample_divfree_noise(const StreamNoiseSpec& spec, const Grid& grid,
                                               std::size_t frames, std::uint64_t first_frame = 0);

/// Periodic separable Gaussian blur, kernel truncated at radius ceil(4 sigma).
ScalarField periodic_gaussian_blur(const ScalarField& f, double sigma);

/// D_x u + D_y v with second-order central differences.
ScalarField central_difference_divergence(const VectorField2& w);

}  // namespace divfree
