// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/kernels.hpp"

namespace fraclab::kernels {
namespace {

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_sum_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double s_dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void s_axpy(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a * x[i];
}

void s_scale(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void s_cmul_real(double* z, const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    z[2 * i] *= m[i];
    z[2 * i + 1] *= m[i];
  }
}

}  // namespace

const Backend& scalar() {
  static const Backend k{s_sum, s_sum_sq, s_dot, s_axpy, s_scale, s_cmul_real, "scalar"};
  return k;
}

}  // namespace fraclab::kernels
