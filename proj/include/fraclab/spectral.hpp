// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fraclab/grid.hpp"
#include "fraclab/order.hpp"

namespace fraclab {

// Squared Gagliardo-type seminorm of f in terms of its amplitude
// coefficients: sum over nonzero modes of |xi|^(2*gamma) |c_k|^2.
// The zero mode carries no seminorm content and is skipped.
double hgamma_seminorm_sq(const Spectrum& s, const FractionalOrder& ord);

// Spectral-multiplier route: multiply each coefficient by |xi|^(2*gamma)
// and synthesize back to grid values. The zero mode is annihilated.
BoundaryFunction frac_laplacian_spectral(const BoundaryFunction& f,
                                         const FractionalOrder& ord);

// Same multiplier applied in coefficient space (no synthesis); useful for
// semigroup-style composition checks.
Spectrum frac_laplacian_coefficients(const Spectrum& s, const FractionalOrder& ord);

}  // namespace fraclab
