// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }

// FFTW plan creation is not thread-safe; executing a cached plan on new
// arrays is. Plans are created with FFTW_UNALIGNED so any vector storage works.
class PlanCache {
 public:
  fftw_plan get(int n_dim, int n, int sign) {
    std::scoped_lock lk(mu_);
    auto key = std::make_tuple(n_dim, n, sign);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<fftw_complex> tmp(n_dim == 2 ? std::size_t(n) * n : std::size_t(n));
    fftw_plan p = n_dim == 2
                      ? fftw_plan_dft_2d(n, n, tmp.data(), tmp.data(), sign,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED)
                      : fftw_plan_dft_1d(n, tmp.data(), tmp.data(), sign,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> cache_;
};

PlanCache& plans() {
  static PlanCache c;
  return c;
}

void check_signal(const XGrid& g, std::size_t len, const char* what) {
  if (len != g.total_points())
    throw GridMismatchError(std::string(what) + ": expected " +
                            std::to_string(g.total_points()) + " values, got " +
                            std::to_string(len));
}

}  // namespace

XGrid make_grid(int n_dim, int points_per_axis, double period) {
  if (n_dim != 1 && n_dim != 2)
    throw GridMismatchError("n_dim must be 1 or 2, got " + std::to_string(n_dim));
  if (!is_pow2(points_per_axis) || points_per_axis < 8)
    throw GridMismatchError("points_per_axis must be a power of two >= 8, got " +
                            std::to_string(points_per_axis));
  if (!(period > 0.0))
    throw GridMismatchError("period must be positive");
  return XGrid{n_dim, points_per_axis, period};
}

double frequency_magnitude(const XGrid& g, std::size_t idx) {
  const int n = g.points_per_axis;
  const double unit = 2.0 * std::numbers::pi / g.period;
  auto signed_k = [n](int i) { return i <= n / 2 ? i : i - n; };
  if (g.n_dim == 1) {
    const int k = signed_k(static_cast<int>(idx));
    return unit * std::abs(k);
  }
  const int k0 = signed_k(static_cast<int>(idx) / n);
  const int k1 = signed_k(static_cast<int>(idx) % n);
  return unit * std::hypot(double(k0), double(k1));
}

Spectrum dft_forward(const BoundaryFunction& f) {
  check_signal(f.grid, f.values.size(), "dft_forward");
  const std::size_t total = f.grid.total_points();
  std::vector<std::complex<double>> buf(total);
  for (std::size_t i = 0; i < total; ++i) buf[i] = f.values[i];
  fftw_plan p = plans().get(f.grid.n_dim, f.grid.points_per_axis, FFTW_FORWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(buf.data()));
  const double inv = 1.0 / static_cast<double>(total);
  Spectrum s;
  s.grid = f.grid;
  s.coefficients.resize(total);
  s.frequency_magnitudes.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    s.coefficients[i] = buf[i] * inv;
    s.frequency_magnitudes[i] = frequency_magnitude(f.grid, i);
  }
  return s;
}

BoundaryFunction dft_inverse(const Spectrum& s) {
  check_signal(s.grid, s.coefficients.size(), "dft_inverse");
  std::vector<std::complex<double>> buf = s.coefficients;
  fftw_plan p = plans().get(s.grid.n_dim, s.grid.points_per_axis, FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(buf.data()));
  BoundaryFunction f;
  f.grid = s.grid;
  f.values.resize(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) f.values[i] = buf[i].real();
  return f;
}

BoundaryFunction make_cosine(const XGrid& g, int k, double amplitude) {
  BoundaryFunction f{g, std::vector<double>(g.total_points())};
  const double w = 2.0 * std::numbers::pi * k / g.period;
  const int n = g.points_per_axis;
  if (g.n_dim == 1) {
    for (int i = 0; i < n; ++i) f.values[i] = amplitude * std::cos(w * g.coord(i));
  } else {
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        f.values[std::size_t(i0) * n + i1] = amplitude * std::cos(w * g.coord(i0));
  }
  return f;
}

BoundaryFunction make_gaussian(const XGrid& g, double sigma, double center_frac) {
  BoundaryFunction f{g, std::vector<double>(g.total_points())};
  const double L = g.period;
  const double c = center_frac * L;
  auto dist = [&](double x) {
    double d = std::fmod(x - c, L);
    if (d > L / 2) d -= L;
    if (d < -L / 2) d += L;
    return d;
  };
  const int n = g.points_per_axis;
  if (g.n_dim == 1) {
    for (int i = 0; i < n; ++i) {
      const double d = dist(g.coord(i));
      f.values[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    }
  } else {
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1) {
        const double d0 = dist(g.coord(i0));
        const double d1 = dist(g.coord(i1));
        f.values[std::size_t(i0) * n + i1] =
            std::exp(-(d0 * d0 + d1 * d1) / (2.0 * sigma * sigma));
      }
  }
  return f;
}

BoundaryFunction make_constant(const XGrid& g, double c) {
  return BoundaryFunction{g, std::vector<double>(g.total_points(), c)};
}

}  // namespace fraclab
