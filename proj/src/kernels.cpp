#include "divfree/kernels.hpp"

#include <omp.h>

#include <numbers>
#include <vector>

namespace divfree::kernels {

namespace {

inline void project_mode(int kx, int ky, int nx, int ny, Complex& u, Complex& v) {
  if (kx == 0 && ky == 0) {
    u = 0.0;
    v = 0.0;
    return;
  }
  const int ex = odd_wavenumber(kx, nx);
  const int ey = odd_wavenumber(ky, ny);
  if (ex == 0 && ey == 0) return;  // (N/2, N/2) checkerboard: divergence-free already
  const double k2 = static_cast<double>(ex) * ex + static_cast<double>(ey) * ey;
  const Complex alpha = (static_cast<double>(ex) * u + static_cast<double>(ey) * v) / k2;
  u -= static_cast<double>(ex) * alpha;
  v -= static_cast<double>(ey) * alpha;
}

inline double laplacian_symbol(const Grid& grid, int kx, int ky) {
  const double s = 2.0 * std::numbers::pi / grid.length();
  return s * s * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky);
}

inline int keep_mode(int k, int n) { return 3 * (k < 0 ? -k : k) <= n; }

}  // namespace

namespace serial {

void leray_modes(const Grid& grid, std::span<Complex> uh, std::span<Complex> vh) {
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      const auto i = grid.index(ix, iy);
      project_mode(kx, ky, grid.nx(), grid.ny(), uh[i], vh[i]);
    }
  }
}

void dealias(const Grid& grid, std::span<Complex> coeffs) {
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      if (!keep_mode(kx, grid.nx()) || !keep_mode(ky, grid.ny())) coeffs[grid.index(ix, iy)] = 0.0;
    }
  }
}

void advection(std::span<const double> u, std::span<const double> v, std::span<const double> wx,
               std::span<const double> wy, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i] * wx[i] + v[i] * wy[i];
}

void crank_nicolson(const Grid& grid, double nu, double dt, std::span<const Complex> omega,
                    std::span<const Complex> rhs, std::span<Complex> out) {
  for (int iy = 0; iy < grid.ny(); ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, grid.ny());
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const int kx = WavenumberTable::wavenumber(ix, grid.nx());
      const auto i = grid.index(ix, iy);
      const double a = 0.5 * nu * laplacian_symbol(grid, kx, ky) * dt;
      out[i] = ((1.0 - a) * omega[i] + dt * rhs[i]) / (1.0 + a);
    }
  }
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
}

double dot(const Grid& grid, std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (int iy = 0; iy < grid.ny(); ++iy) {
    double row = 0.0;
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const auto i = grid.index(ix, iy);
      row += a[i] * b[i];
    }
    total += row;
  }
  return total;
}

}  // namespace serial

namespace omp {

void leray_modes(const Grid& grid, std::span<Complex> uh, std::span<Complex> vh) {
  const int nx = grid.nx();
  const int ny = grid.ny();
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny; ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, ny);
    for (int ix = 0; ix < nx; ++ix) {
      const auto i = grid.index(ix, iy);
      project_mode(WavenumberTable::wavenumber(ix, nx), ky, nx, ny, uh[i], vh[i]);
    }
  }
}

void dealias(const Grid& grid, std::span<Complex> coeffs) {
  const int nx = grid.nx();
  const int ny = grid.ny();
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny; ++iy) {
    const bool row_kept = keep_mode(WavenumberTable::wavenumber(iy, ny), ny);
    for (int ix = 0; ix < nx; ++ix) {
      if (!row_kept || !keep_mode(WavenumberTable::wavenumber(ix, nx), nx))
        coeffs[grid.index(ix, iy)] = 0.0;
    }
  }
}

void advection(std::span<const double> u, std::span<const double> v, std::span<const double> wx,
               std::span<const double> wy, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = u[i] * wx[i] + v[i] * wy[i];
}

void crank_nicolson(const Grid& grid, double nu, double dt, std::span<const Complex> omega,
                    std::span<const Complex> rhs, std::span<Complex> out) {
  const int nx = grid.nx();
  const int ny = grid.ny();
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny; ++iy) {
    const int ky = WavenumberTable::wavenumber(iy, ny);
    for (int ix = 0; ix < nx; ++ix) {
      const auto i = grid.index(ix, iy);
      const double a = 0.5 * nu * laplacian_symbol(grid, WavenumberTable::wavenumber(ix, nx), ky) * dt;
      out[i] = ((1.0 - a) * omega[i] + dt * rhs[i]) / (1.0 + a);
    }
  }
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

double dot(const Grid& grid, std::span<const double> a, std::span<const double> b) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  std::vector<double> rows(ny);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny; ++iy) {
    double row = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      const auto i = grid.index(ix, iy);
      row += a[i] * b[i];
    }
    rows[iy] = row;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace omp

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace divfree::kernels
