#include "divfree/noise.hpp"

#include <cmath>
#include <numbers>

#include "divfree/errors.hpp"
#include "divfree/fft.hpp"
#include "divfree/rng.hpp"

namespace divfree {

void GrfSpec::validate() const {
  if (!(alpha > 1.0)) throw InvalidArgument("GRF alpha must exceed 1");
  if (!(tau > 0.0)) throw InvalidArgument("GRF tau must be positive");
  if (amplitude && !(*amplitude >= 0.0)) throw InvalidArgument("GRF amplitude must be nonnegative");
}

void StreamNoiseSpec::validate() const {
  if (mode == NoiseMode::spectral) grf.validate();
  if (mode == NoiseMode::finite_difference && !(blur_sigma > 0.0))
    throw InvalidArgument("blur_sigma must be positive");
  if (amplitude && !(*amplitude >= 0.0)) throw InvalidArgument("noise amplitude must be nonnegative");
}

namespace {

bool excluded_mode(int kx, int ky, const Grid& grid) {
  return (kx == 0 && ky == 0) || 2 * kx == -grid.nx() || 2 * ky == -grid.ny();
}

double physical_k2(int kx, int ky, const Grid& grid) {
  const double s = 2.0 * std::numbers::pi / grid.length();
  return s * s * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky);
}

// (4 pi^2 |k|^2 + tau^2)^(-alpha) on kept modes.
std::vector<double> base_spectrum(const GrfSpec& spec, const Grid& grid) {
  std::vector<double> var(grid.size(), 0.0);
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      if (excluded_mode(kx, ky, grid)) continue;
      var[grid.index(ix, iy)] = std::pow(physical_k2(kx, ky, grid) + spec.tau * spec.tau, -spec.alpha);
    }
  }
  return var;
}

double area(const Grid& grid) { return grid.length() * grid.length(); }

// Draws DFT coefficients (n_x n_y times the Fourier-series coefficients) with
// E|c(k)|^2 = variance[k] and Hermitian symmetry. Modes are visited in index
// order; each conjugate pair consumes two normals at its lower index.
SpectralField draw_hermitian(const Grid& grid, const std::vector<double>& variance, std::uint64_t stream_seed) {
  NormalStream normal(stream_seed);
  SpectralField out(grid);
  const double n_total = static_cast<double>(grid.size());
  for (int iy = 0; iy < grid.ny(); ++iy) {
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const auto i = grid.index(ix, iy);
      const auto mirror = grid.index((grid.nx() - ix) % grid.nx(), (grid.ny() - iy) % grid.ny());
      if (variance[i] == 0.0 || mirror <= i) continue;
      const double sd = std::sqrt(0.5 * variance[i]) * n_total;
      const double re = normal();
      const double im = normal();
      out.coeffs()[i] = Complex(sd * re, sd * im);
      out.coeffs()[mirror] = Complex(sd * re, -sd * im);
    }
  }
  return out;
}

double grf_scale_squared(const GrfSpec& spec, const Grid& grid, const std::vector<double>& base) {
  if (spec.amplitude) return *spec.amplitude * *spec.amplitude;
  double total = 0.0;
  for (double v : base) total += v;
  return 1.0 / (area(grid) * total);
}

// Scale on psi so that E|curl_perp psi|^2 = target^2.
double noise_psi_scale_squared(const StreamNoiseSpec& spec, const Grid& grid, const std::vector<double>& base) {
  const double target = spec.amplitude.value_or(1.0);
  double total = 0.0;
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      total += physical_k2(kx, ky, grid) * base[grid.index(ix, iy)];
    }
  }
  return target * target / (area(grid) * total);
}

VectorField2 spectral_noise_frame(const Grid& grid, const std::vector<double>& psi_variance,
                                  std::uint64_t stream_seed) {
  const SpectralField psi = draw_hermitian(grid, psi_variance, stream_seed);
  const double s = 2.0 * std::numbers::pi / grid.length();
  SpectralVector u{SpectralField(grid), SpectralField(grid)};
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = odd_wavenumber(WavenumberTable::wavenumber(iy, grid.ny()), grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = odd_wavenumber(WavenumberTable::wavenumber(ix, grid.nx()), grid.nx());
      const auto i = grid.index(ix, iy);
      u.u.coeffs()[i] = Complex(0.0, s * ky) * psi.coeffs()[i];
      u.v.coeffs()[i] = Complex(0.0, -s * kx) * psi.coeffs()[i];
    }
  }
  return inverse_fft2(u);
}

std::vector<double> gaussian_taps(double sigma) {
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (int m = -radius; m <= radius; ++m) {
    taps[m + radius] = std::exp(-0.5 * m * m / (sigma * sigma));
    total += taps[m + radius];
  }
  for (double& t : taps) t /= total;
  return taps;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

VectorField2 central_curl(const ScalarField& psi) {
  const Grid& grid = psi.grid();
  VectorField2 out(grid);
  const double inv2hx = 1.0 / (2.0 * grid.hx());
  const double inv2hy = 1.0 / (2.0 * grid.hy());
  for (int iy = 0; iy < grid.ny(); ++iy) {
    for (int ix = 0; ix < grid.nx(); ++ix) {
      out.u()(ix, iy) = (psi(ix, wrap(iy + 1, grid.ny())) - psi(ix, wrap(iy - 1, grid.ny()))) * inv2hy;
      out.v()(ix, iy) = -(psi(wrap(ix + 1, grid.nx()), iy) - psi(wrap(ix - 1, grid.nx()), iy)) * inv2hx;
    }
  }
  return out;
}

// E|u|^2 for unit white noise, from the impulse response of blur + curl.
double fd_expected_norm_squared(const Grid& grid, double sigma) {
  ScalarField impulse(grid);
  impulse(0, 0) = 1.0;
  const VectorField2 response = central_curl(periodic_gaussian_blur(impulse, sigma));
  double var = 0.0;
  for (double x : response.u().values()) var += x * x;
  for (double x : response.v().values()) var += x * x;
  return area(grid) * var;
}

VectorField2 fd_noise_frame(const Grid& grid, double sigma, double scale, std::uint64_t stream_seed) {
  NormalStream normal(stream_seed);
  ScalarField white(grid);
  for (double& x : white.values()) x = normal();
  VectorField2 u = central_curl(periodic_gaussian_blur(white, sigma));
  u *= scale;
  return u;
}

}  // namespace

std::vector<double> grf_mode_variance(const GrfSpec& spec, const Grid& grid) {
  spec.validate();
  auto var = base_spectrum(spec, grid);
  const double scale2 = grf_scale_squared(spec, grid, var);
  for (double& v : var) v *= scale2;
  return var;
}

ScalarField sample_grf_scalar(const GrfSpec& spec, const Grid& grid, std::uint64_t frame) {
  const auto var = grf_mode_variance(spec, grid);
  return inverse_fft2(draw_hermitian(grid, var, derive_seed(spec.seed, frame)));
}

std::vector<double> divfree_noise_mode_variance(const StreamNoiseSpec& spec, const Grid& grid) {
  spec.validate();
  auto var = base_spectrum(spec.grf, grid);
  const double scale2 = noise_psi_scale_squared(spec, grid, var);
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      auto& v = var[grid.index(ix, iy)];
      v *= scale2 * physical_k2(kx, ky, grid);
    }
  }
  return var;
}

std::vector<VectorField2> sample_divfree_noise(const StreamNoiseSpec& spec, const Grid& grid,
                                               std::size_t frames, std::uint64_t first_frame) {
  spec.validate();
  std::vector<VectorField2> out(frames, VectorField2(grid));
  const auto n = static_cast<std::ptrdiff_t>(frames);
  if (spec.mode == NoiseMode::spectral) {
    auto psi_var = base_spectrum(spec.grf, grid);
    const double scale2 = noise_psi_scale_squared(spec, grid, psi_var);
    for (double& v : psi_var) v *= scale2;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t f = 0; f < n; ++f)
      out[f] = spectral_noise_frame(grid, psi_var, derive_seed(spec.grf.seed, first_frame + f));
  } else {
    const double target = spec.amplitude.value_or(1.0);
    const double scale = target / std::sqrt(fd_expected_norm_squared(grid, spec.blur_sigma));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t f = 0; f < n; ++f)
      out[f] = fd_noise_frame(grid, spec.blur_sigma, scale, derive_seed(spec.grf.seed, first_frame + f));
  }
  return out;
}

ScalarField periodic_gaussian_blur(const ScalarField& f, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("blur sigma must be positive");
  const Grid& grid = f.grid();
  const auto taps = gaussian_taps(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  ScalarField along_x(grid);
  for (int iy = 0; iy < grid.ny(); ++iy)
    for (int ix = 0; ix < grid.nx(); ++ix) {
      double acc = 0.0;
      for (int m = -radius; m <= radius; ++m) acc += taps[m + radius] * f(wrap(ix + m, grid.nx()), iy);
      along_x(ix, iy) = acc;
    }
  ScalarField out(grid);
  for (int iy = 0; iy < grid.ny(); ++iy)
    for (int ix = 0; ix < grid.nx(); ++ix) {
      double acc = 0.0;
      for (int m = -radius; m <= radius; ++m) acc += taps[m + radius] * along_x(ix, wrap(iy + m, grid.ny()));
      out(ix, iy) = acc;
    }
  return out;
}

ScalarField central_difference_divergence(const VectorField2& w) {
  const Grid& grid = w.grid();
  ScalarField div(grid);
  const double inv2hx = 1.0 / (2.0 * grid.hx());
  const double inv2hy = 1.0 / (2.0 * grid.hy());
  for (int iy = 0; iy < grid.ny(); ++iy)
    for (int ix = 0; ix < grid.nx(); ++ix)
      div(ix, iy) = (w.u()(wrap(ix + 1, grid.nx()), iy) - w.u()(wrap(ix - 1, grid.nx()), iy)) * inv2hx +
                    (w.v()(ix, wrap(iy + 1, grid.ny())) - w.v()(ix, wrap(iy - 1, grid.ny()))) * inv2hy;
  return div;
}

}  // namespace divfree
