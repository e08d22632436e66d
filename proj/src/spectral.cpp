#include "divfree/spectral.hpp"

#include <cmath>
#include <numbers>

#include "divfree/errors.hpp"
#include "divfree/fft.hpp"
#include "divfree/kernels.hpp"

namespace divfree {

namespace {

// i * 2 pi k / L, with the Nyquist wavenumber zeroed.
Complex first_derivative_symbol(int k, int n, double length) {
  return {0.0, 2.0 * std::numbers::pi * odd_wavenumber(k, n) / length};
}

void apply_derivative(const Grid& grid, std::span<Complex> c, Axis axis, int order) {
  const double s = 2.0 * std::numbers::pi / grid.length();
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      const int k = axis == Axis::x ? kx : ky;
      const int n = axis == Axis::x ? grid.nx() : grid.ny();
      Complex factor;
      if (order == 1) {
        factor = first_derivative_symbol(k, n, grid.length());
      } else {
        factor = -(s * k) * (s * k);
      }
      c[grid.index(ix, iy)] *= factor;
    }
  }
}

SpectralField derivative_of(const SpectralField& f, Axis axis, int order) {
  SpectralField out = f;
  apply_derivative(out.grid(), out.coeffs(), axis, order);
  return out;
}

}  // namespace

SpectralField spectral_derivative(const SpectralField& f, Axis axis, int order) {
  if (order != 1 && order != 2)
    throw InvalidArgument("spectral_derivative supports order 1 or 2, got " + std::to_string(order));
  return derivative_of(f, axis, order);
}

ScalarField divergence(const VectorField2& w) {
  const auto hat = forward_fft2(w);
  SpectralField div = derivative_of(hat.u, Axis::x, 1);
  const SpectralField dvdy = derivative_of(hat.v, Axis::y, 1);
  auto c = div.coeffs();
  auto d = dvdy.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[i];
  return inverse_fft2(div);
}

ScalarField curl_scalar(const VectorField2& w) {
  const auto hat = forward_fft2(w);
  SpectralField curl = derivative_of(hat.v, Axis::x, 1);
  const SpectralField dudy = derivative_of(hat.u, Axis::y, 1);
  auto c = curl.coeffs();
  auto d = dudy.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= d[i];
  return inverse_fft2(curl);
}

VectorField2 curl_perp(const ScalarField& psi) {
  const SpectralField hat = forward_fft2(psi);
  SpectralField u = derivative_of(hat, Axis::y, 1);
  SpectralField v = derivative_of(hat, Axis::x, 1);
  for (auto& c : v.coeffs()) c = -c;
  return {inverse_fft2(u), inverse_fft2(v)};
}

VectorField2 gradient(const ScalarField& q) {
  const SpectralField hat = forward_fft2(q);
  return {inverse_fft2(derivative_of(hat, Axis::x, 1)), inverse_fft2(derivative_of(hat, Axis::y, 1))};
}

ScalarField laplacian(const ScalarField& f) {
  const SpectralField hat = forward_fft2(f);
  SpectralField lap = derivative_of(hat, Axis::x, 2);
  const SpectralField dyy = derivative_of(hat, Axis::y, 2);
  auto c = lap.coeffs();
  auto d = dyy.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[i];
  return inverse_fft2(lap);
}

bool dealias_keeps(int k, int n) noexcept { return 3 * (k < 0 ? -k : k) <= n; }

SpectralField dealias_two_thirds(const SpectralField& f) {
  SpectralField out = f;
  kernels::omp::dealias(out.grid(), out.coeffs());
  return out;
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("l2_inner: grid mismatch");
  return kernels::omp::dot(a.grid(), a.values(), b.values()) * a.grid().cell_area();
}

double l2_inner(const VectorField2& a, const VectorField2& b) {
  return l2_inner(a.u(), b.u()) + l2_inner(a.v(), b.v());
}

double l2_norm(const ScalarField& f) { return std::sqrt(l2_inner(f, f)); }
double l2_norm(const VectorField2& w) { return std::sqrt(l2_inner(w, w)); }

double mean(const ScalarField& f) {
  double total = 0.0;
  for (int iy = 0; iy < f.grid().ny(); ++iy) {
    double row = 0.0;
    for (int ix = 0; ix < f.grid().nx(); ++ix) row += f(ix, iy);
    total += row;
  }
  return total / static_cast<double>(f.grid().size());
}

}  // namespace divfree
