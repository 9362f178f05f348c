// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>

// Hot array loops used by the assembly, quadrature and stencil code paths.
//
// Every kernel has a scalar reference implementation and (on x86-64) an AVX2+FMA
// variant compiled with target attributes in a separate translation unit. The
// active backend is chosen once at process start from CPUID, overridable with
// FRACLAB_SIMD=scalar|avx2 for testing. Reductions accumulate in a fixed
// blocked order so results are reproducible for a given backend; the scalar
// and SIMD variants are equivalence-tested against each other to ~1e-13.

namespace fraclab::kernels {

struct Backend {
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // out[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* out, std::size_t n);
  // out[i] = a * x[i]
  void (*scale)(double a, const double* x, double* out, std::size_t n);
  // interleaved complex z[i] *= m[i] (real multiplier)
  void (*cmul_real)(double* z, const double* m, std::size_t n);
  const char* name;
};

/// Active backend (dispatch decided on first use).
const Backend& active();

/// Reference backend, always scalar; used by the equivalence tests.
const Backend& scalar();

/// AVX2 backend or nullptr when unsupported on this machine.
const Backend* avx2_if_supported();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double sum_sq(const double* x, std::size_t n) { return active().sum_sq(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* out, std::size_t n) { active().axpy(a, x, out, n); }
inline void scale(double a, const double* x, double* out, std::size_t n) { active().scale(a, x, out, n); }
inline void cmul_real(double* z, const double* m, std::size_t n) { active().cmul_real(z, m, n); }

/// Name of the backend in use ("scalar" or "avx2"), for diagnostics.
std::string_view active_name();

}  // namespace fraclab::kernels
