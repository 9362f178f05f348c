// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace fraclab {

// Scaled modified Bessel function of the second kind: e^x * K_nu(x), x > 0.
// The order may be any real number (K is even in nu). Scaling keeps the
// result representable for large x where K itself underflows.
//
// Temme's series is used for x <= 2 and a Steed continued fraction for
// x > 2, followed by the (stable) upward order recurrence. Throws
// BesselEvalFailure if x <= 0 / non-finite or an expansion fails to settle.
double scaled_bessel_k(double nu, double x);

// Unscaled K_nu(x); underflows to zero for very large x by design.
double bessel_k(double nu, double x);

// y^nu * K_nu(y) for nu > 0, continuously extended to y = 0 where the
// limit is 2^(nu-1) * Gamma(nu). This is the natural building block for
// decaying profile solutions; underflow for huge y yields 0.
double y_pow_k(double nu, double y);

}  // namespace fraclab
