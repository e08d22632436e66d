#pragma once

#include <span>

#include "divfree/field.hpp"

namespace divfree {

// Unnormalized forward DFT (exp(-2 pi i k.x) kernel); the inverse applies
// 1/(n_x n_y). Backed by FFTW complex-to-complex plans cached per grid shape.
// Plan creation is serialized internally; execution is reentrant.

SpectralField forward_fft2(const ScalarField& f);
SpectralVector forward_fft2(const VectorField2& w);

/// Real part of the normalized inverse transform.
ScalarField inverse_fft2(const SpectralField& f);
VectorField2 inverse_fft2(const SpectralVector& w);

/// Full complex inverse, for checking imaginary residues.
std::vector<Complex> inverse_fft2_complex(const SpectralField& f);

namespace fft_detail {
void forward_inplace(const Grid& grid, std::span<Complex> data);
void backward_inplace(const Grid& grid, std::span<Complex> data);  // unnormalized
}  // namespace fft_detail

}  // namespace divfree
