#pragma once

#include <complex>
#include <span>
#include <vector>

#include "divfree/grid.hpp"

namespace divfree {

using Complex = std::complex<double>;

/// Real scalar field on a Grid, values stored row-major (y outer).
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid);
  ScalarField(const Grid& grid, std::vector<double> values);

  template <class Fn>
  static ScalarField from_function(const Grid& grid, Fn&& fn) {
    ScalarField f(grid);
    for (int iy = 0; iy < grid.ny(); ++iy)
      for (int ix = 0; ix < grid.nx(); ++ix)
        f.values_[grid.index(ix, iy)] = fn(grid.x(ix), grid.y(iy));
    return f;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator()(int ix, int iy) const noexcept { return values_[grid_.index(ix, iy)]; }
  double& operator()(int ix, int iy) noexcept { return values_[grid_.index(ix, iy)]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Two-component real velocity field sharing one Grid.
class VectorField2 {
 public:
  explicit VectorField2(const Grid& grid);
  VectorField2(ScalarField u, ScalarField v);

  template <class FnU, class FnV>
  static VectorField2 from_functions(const Grid& grid, FnU&& fu, FnV&& fv) {
    return {ScalarField::from_function(grid, fu), ScalarField::from_function(grid, fv)};
  }

  const Grid& grid() const noexcept { return u_.grid(); }
  const ScalarField& u() const noexcept { return u_; }
  const ScalarField& v() const noexcept { return v_; }
  ScalarField& u() noexcept { return u_; }
  ScalarField& v() noexcept { return v_; }

  VectorField2& operator+=(const VectorField2& other);
  VectorField2& operator-=(const VectorField2& other);
  VectorField2& operator*=(double s);

 private:
  ScalarField u_;
  ScalarField v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
VectorField2 operator+(VectorField2 a, const VectorField2& b);
VectorField2 operator-(VectorField2 a, const VectorField2& b);
VectorField2 operator*(double s, VectorField2 a);

/// a*x + b*y, evaluated pointwise in one pass.
VectorField2 axpby(double a, const VectorField2& x, double b, const VectorField2& y);

/// Complex Fourier coefficients of a scalar field, same layout as the grid.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);
  SpectralField(const Grid& grid, std::vector<Complex> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  Complex operator()(int ix, int iy) const noexcept { return coeffs_[grid_.index(ix, iy)]; }
  Complex& operator()(int ix, int iy) noexcept { return coeffs_[grid_.index(ix, iy)]; }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// Spectral counterpart of VectorField2: one plane per component.
struct SpectralVector {
  SpectralField u;
  SpectralField v;
};

bool all_finite(const ScalarField& f);
bool all_finite(const VectorField2& w);

}  // namespace divfree
