// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/spectral.hpp"

#include <cmath>

namespace fraclab {

double hgamma_seminorm_sq(const Spectrum& s, const FractionalOrder& ord) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
    const double xi = s.frequency_magnitudes[i];
    if (xi == 0.0) continue;
    acc += std::pow(xi, 2.0 * ord.gamma) * std::norm(s.coefficients[i]);
  }
  return acc;
}

Spectrum frac_laplacian_coefficients(const Spectrum& s, const FractionalOrder& ord) {
  Spectrum out = s;
  for (std::size_t i = 0; i < out.coefficients.size(); ++i) {
    const double xi = out.frequency_magnitudes[i];
    out.coefficients[i] *= xi == 0.0 ? 0.0 : std::pow(xi, 2.0 * ord.gamma);
  }
  return out;
}

BoundaryFunction frac_laplacian_spectral(const BoundaryFunction& f,
                                         const FractionalOrder& ord) {
  return dft_inverse(frac_laplacian_coefficients(dft_forward(f), ord));
}

}  // namespace fraclab
