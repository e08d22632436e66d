#include "divfree/hodge.hpp"

#include <cmath>
#include <numbers>

#include "divfree/errors.hpp"
#include "divfree/fft.hpp"
#include "divfree/kernels.hpp"
#include "divfree/spectral.hpp"

namespace divfree {

void leray_project_spectral(SpectralVector& w) {
  kernels::omp::leray_modes(w.u.grid(), w.u.coeffs(), w.v.coeffs());
}

VectorField2 leray_project(const VectorField2& w) {
  auto hat = forward_fft2(w);
  leray_project_spectral(hat);
  return inverse_fft2(hat);
}

HodgeParts helmholtz_decompose(const VectorField2& w) {
  const Grid& grid = w.grid();
  const auto hat = forward_fft2(w);
  SpectralVector sol = hat;
  leray_project_spectral(sol);

  const double s = 2.0 * std::numbers::pi / grid.length();
  SpectralField q(grid);
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ey = odd_wavenumber(WavenumberTable::wavenumber(iy, grid.ny()), grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int ex = odd_wavenumber(WavenumberTable::wavenumber(ix, grid.nx()), grid.nx());
      if (ex == 0 && ey == 0) continue;
      const auto i = grid.index(ix, iy);
      const double k2 = static_cast<double>(ex) * ex + static_cast<double>(ey) * ey;
      const Complex kw = static_cast<double>(ex) * hat.u.coeffs()[i] +
                         static_cast<double>(ey) * hat.v.coeffs()[i];
      q.coeffs()[i] = Complex(0.0, -1.0) * kw / (s * k2);
    }
  }
  return {inverse_fft2(sol), inverse_fft2(q)};
}

ScalarField stream_function_of(const VectorField2& u, double tolerance) {
  const double norm = l2_norm(u);
  const double div = l2_norm(divergence(u));
  if (div > tolerance * norm) throw NotSolenoidal(norm > 0.0 ? div / norm : div, tolerance);

  const Grid& grid = u.grid();
  const auto hat = forward_fft2(u);
  const double s = 2.0 * std::numbers::pi / grid.length();
  SpectralField psi(grid);
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ey = odd_wavenumber(WavenumberTable::wavenumber(iy, grid.ny()), grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int ex = odd_wavenumber(WavenumberTable::wavenumber(ix, grid.nx()), grid.nx());
      if (ex == 0 && ey == 0) continue;
      const auto i = grid.index(ix, iy);
      const double k2 = static_cast<double>(ex) * ex + static_cast<double>(ey) * ey;
      // u = i s ey psi, v = -i s ex psi
      const Complex c = static_cast<double>(ey) * hat.u.coeffs()[i] -
                        static_cast<double>(ex) * hat.v.coeffs()[i];
      psi.coeffs()[i] = Complex(0.0, -1.0) * c / (s * k2);
    }
  }
  return inverse_fft2(psi);
}

}  // namespace divfree
