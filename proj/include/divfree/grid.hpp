#pragma once

#include <cstddef>
#include <vector>

namespace divfree {

/// Uniform periodic n_x by n_y discretization of a square torus of side
/// `length` (1.0 for the unit torus). Both sizes must be even and at least 4.
class Grid {
 public:
  Grid(int nx, int ny, double length = 1.0);
  explicit Grid(int n) : Grid(n, n) {}

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double length() const noexcept { return length_; }
  double hx() const noexcept { return length_ / nx_; }
  double hy() const noexcept { return length_ / ny_; }
  double cell_area() const noexcept { return hx() * hy(); }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }
  /// Row-major index with y outer.
  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(iy) * nx_ + ix;
  }
  double x(int ix) const noexcept { return ix * hx(); }
  double y(int iy) const noexcept { return iy * hy(); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int nx_;
  int ny_;
  double length_;
};

/// Integer wavevectors in DFT order (0, 1, ..., N/2-1, -N/2, ..., -1).
/// The physical factor 2*pi/length is applied only inside differentiation.
struct WavenumberTable {
  std::vector<int> kx;
  std::vector<int> ky;

  explicit WavenumberTable(const Grid& grid);

  static int wavenumber(int index, int n) noexcept {
    return index < n / 2 ? index : index - n;
  }
};

/// Wavenumber as seen by a first derivative: the Nyquist entry -N/2 maps to
/// zero so that odd derivatives of real data stay real.
inline int odd_wavenumber(int k, int n) noexcept { return 2 * k == -n ? 0 : k; }

}  // namespace divfree
