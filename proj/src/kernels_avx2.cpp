// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

// AVX2+FMA variants of the hot loops. Compiled with per-function target
// attributes so the rest of the build stays baseline; only executed after the
// dispatcher has confirmed CPU support. Loads are unaligned (callers pass
// std::vector storage), main loops are 4-wide with scalar tails.

#include "fraclab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace fraclab::kernels {
namespace {

#define FRACLAB_AVX2 __attribute__((target("avx2,fma")))

FRACLAB_AVX2 double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

FRACLAB_AVX2 double v_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i];
  return r;
}

FRACLAB_AVX2 double v_sum_sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * x[i];
  return r;
}

FRACLAB_AVX2 double v_dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

FRACLAB_AVX2 void v_axpy(double a, const double* x, double* out, std::size_t n) {
  __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d o = _mm256_loadu_pd(out + i);
    o = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), o);
    _mm256_storeu_pd(out + i, o);
  }
  for (; i < n; ++i) out[i] += a * x[i];
}

FRACLAB_AVX2 void v_scale(double a, const double* x, double* out, std::size_t n) {
  __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

FRACLAB_AVX2 void v_cmul_real(double* z, const double* m, std::size_t n) {
  std::size_t i = 0;
  // two complex values (4 doubles) per iteration; duplicate each multiplier
  // into the (re, im) lane pair
  for (; i + 2 <= n; i += 2) {
    __m128d mm = _mm_loadu_pd(m + i);
    __m256d mult = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0x50);
    __m256d v = _mm256_loadu_pd(z + 2 * i);
    _mm256_storeu_pd(z + 2 * i, _mm256_mul_pd(v, mult));
  }
  for (; i < n; ++i) {
    z[2 * i] *= m[i];
    z[2 * i + 1] *= m[i];
  }
}

#undef FRACLAB_AVX2

}  // namespace

const Backend* avx2_if_supported() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
  static const Backend k{v_sum, v_sum_sq, v_dot, v_axpy, v_scale, v_cmul_real, "avx2"};
  return &k;
}

}  // namespace fraclab::kernels

#else  // non-x86: dispatcher falls back to the scalar reference

namespace fraclab::kernels {
const Backend* avx2_if_supported() { return nullptr; }
}  // namespace fraclab::kernels

#endif
