#pragma once

#include "divfree/field.hpp"

namespace divfree {

/// Orthogonal split w = solenoidal + grad(potential) + mean(w).
struct HodgeParts {
  VectorField2 solenoidal;
  ScalarField potential;
};

/// Spectral Leray projector onto divergence-free, zero-mean fields.
///
/// Per mode k != 0 the component along k is removed,
///   P w(k) = w(k) - (k . w(k) / |k|^2) k,
/// and the k = 0 mode is zeroed. Wavenumbers are the ones the first
/// derivative sees: a Nyquist component counts as zero, so P is exactly the
/// orthogonal projector onto the null space of `divergence` among zero-mean
/// fields, real-valued and idempotent on every even grid.
VectorField2 leray_project(const VectorField2& w);

/// Same projector applied to spectral planes in place.
void leray_project_spectral(SpectralVector& w);

HodgeParts helmholtz_decompose(const VectorField2& w);

/// Zero-mean psi with curl_perp(psi) = u. Throws NotSolenoidal when
/// |div u| > tolerance * |u| (L2 norms).
ScalarField stream_function_of(const VectorField2& u, double tolerance = 1e-8);

}  // namespace divfree
