#pragma once

#include "divfree/field.hpp"

namespace divfree {

enum class Axis { x, y };

/// Multiplies by (i 2 pi k / length)^order along `axis`; order 1 or 2.
/// Odd orders zero the Nyquist mode.
SpectralField spectral_derivative(const SpectralField& f, Axis axis, int order);

ScalarField divergence(const VectorField2& w);
/// dv/dx - du/dy
ScalarField curl_scalar(const VectorField2& w);
/// (d psi/dy, -d psi/dx)
VectorField2 curl_perp(const ScalarField& psi);
/// (d q/dx, d q/dy)
VectorField2 gradient(const ScalarField& q);
ScalarField laplacian(const ScalarField& f);

/// Zeroes every mode with |k_x| > n_x/3 or |k_y| > n_y/3.
SpectralField dealias_two_thirds(const SpectralField& f);
bool dealias_keeps(int k, int n) noexcept;

double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const VectorField2& a, const VectorField2& b);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField2& w);
double mean(const ScalarField& f);

}  // namespace divfree
