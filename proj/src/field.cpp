#include "divfree/field.hpp"

#include <algorithm>
#include <cmath>

#include "divfree/errors.hpp"
#include "divfree/kernels.hpp"

namespace divfree {

Grid::Grid(int nx, int ny, double length) : nx_(nx), ny_(ny), length_(length) {
  if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0)
    throw InvalidArgument("grid sizes must be even and >= 4, got " + std::to_string(nx) + "x" +
                          std::to_string(ny));
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidArgument("grid length must be positive and finite");
}

WavenumberTable::WavenumberTable(const Grid& grid) : kx(grid.nx()), ky(grid.ny()) {
  for (int i = 0; i < grid.nx(); ++i) kx[i] = wavenumber(i, grid.nx());
  for (int i = 0; i < grid.ny(); ++i) ky[i] = wavenumber(i, grid.ny());
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw InvalidArgument("fields live on different grids");
}

}  // namespace

ScalarField::ScalarField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidArgument("value count does not match grid");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_);
  kernels::omp::axpby(1.0, values_, 1.0, other.values_, values_);
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_);
  kernels::omp::axpby(1.0, values_, -1.0, other.values_, values_);
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

VectorField2::VectorField2(const Grid& grid) : u_(grid), v_(grid) {}

VectorField2::VectorField2(ScalarField u, ScalarField v) : u_(std::move(u)), v_(std::move(v)) {
  require_same_grid(u_.grid(), v_.grid());
}

VectorField2& VectorField2::operator+=(const VectorField2& other) {
  u_ += other.u_;
  v_ += other.v_;
  return *this;
}

VectorField2& VectorField2::operator-=(const VectorField2& other) {
  u_ -= other.u_;
  v_ -= other.v_;
  return *this;
}

VectorField2& VectorField2::operator*=(double s) {
  u_ *= s;
  v_ *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
VectorField2 operator+(VectorField2 a, const VectorField2& b) { return a += b; }
VectorField2 operator-(VectorField2 a, const VectorField2& b) { return a -= b; }
VectorField2 operator*(double s, VectorField2 a) { return a *= s; }

VectorField2 axpby(double a, const VectorField2& x, double b, const VectorField2& y) {
  require_same_grid(x.grid(), y.grid());
  VectorField2 out(x.grid());
  kernels::omp::axpby(a, x.u().values(), b, y.u().values(), out.u().values());
  kernels::omp::axpby(a, x.v().values(), b, y.v().values(), out.v().values());
  return out;
}

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(const Grid& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw InvalidArgument("coefficient count does not match grid");
}

bool all_finite(const ScalarField& f) {
  return std::ranges::all_of(f.values(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const VectorField2& w) { return all_finite(w.u()) && all_finite(w.v()); }

}  // namespace divfree
