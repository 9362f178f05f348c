// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace fraclab {

/// Periodic sampling box [0, L)^n_dim, n_dim ∈ {1, 2}, power-of-two points per
/// axis. Frequencies live on the integer lattice scaled by 2π/L.
struct XGrid {
  int n_dim = 1;
  int points_per_axis = 0;
  double period = 0.0;

  std::size_t total_points() const {
    std::size_t t = static_cast<std::size_t>(points_per_axis);
    return n_dim == 2 ? t * t : t;
  }
  double spacing() const { return period / points_per_axis; }
  /// Node coordinate along one axis.
  double coord(int i) const { return spacing() * i; }
  bool operator==(const XGrid&) const = default;
};

/// Validating constructor: power-of-two points_per_axis ≥ 8, period > 0.
XGrid make_grid(int n_dim, int points_per_axis, double period);

/// Real samples of a boundary function f over the grid nodes (row-major for
/// n_dim = 2: index = i0 * N + i1).
struct BoundaryFunction {
  XGrid grid;
  std::vector<double> values;
};

/// Fourier coefficients of a BoundaryFunction.
///
/// Convention (used by every module): coefficients are mode amplitudes,
///   c_k = (1/N^n) Σ_j f_j exp(-i ξ_k·x_j),   f_j = Σ_k c_k exp(+i ξ_k·x_j),
/// stored in FFT layout (k and N-k conjugate for real signals). Under this
/// convention Σ_j |f_j|² = N^n Σ_k |c_k|², and the extension-energy ratio
/// carries the box volume L^n (see field.hpp).
struct Spectrum {
  XGrid grid;
  std::vector<std::complex<double>> coefficients;
  std::vector<double> frequency_magnitudes;  ///< |ξ_k| per stored coefficient
};

Spectrum dft_forward(const BoundaryFunction& f);
BoundaryFunction dft_inverse(const Spectrum& s);

/// |ξ| for flat coefficient index idx on this grid.
double frequency_magnitude(const XGrid& g, std::size_t idx);

// Signal builders used by tests and the CLI.
BoundaryFunction make_cosine(const XGrid& g, int k, double amplitude = 1.0);
/// Periodized Gaussian bump exp(-d(x,x0)²/(2σ²)) centered at x0 (default L/2).
BoundaryFunction make_gaussian(const XGrid& g, double sigma, double center_frac = 0.5);
BoundaryFunction make_constant(const XGrid& g, double c);

}  // namespace fraclab
