// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

// Taylor coefficients of 1/Gamma(1+t) around t=0, used only when the
// reduced order is so close to zero that the direct quotient cancels.
constexpr double kG1 = 0.5772156649015329;    // t
constexpr double kG2 = -0.6558780715202538;   // t^2
constexpr double kG3 = -0.0420026350340952;   // t^3

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),
// gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2, stable through mu -> 0.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl,
                  double& gammi) {
  gampl = 1.0 / std::tgamma(1.0 + mu);
  gammi = 1.0 / std::tgamma(1.0 - mu);
  if (std::abs(mu) < 1e-5) {
    gam1 = -(kG1 + kG3 * mu * mu);
    gam2 = 1.0 + kG2 * mu * mu;
  } else {
    gam1 = (gammi - gampl) / (2.0 * mu);
    gam2 = (gammi + gampl) / 2.0;
  }
}

// e^x K_mu(x) and e^x K_{mu+1}(x) for |mu| <= 1/2, 0 < x <= 2 (Temme 1975).
void scaled_k_series(double mu, double x, double& kmu, double& kmu1) {
  const double x2 = 0.5 * x;
  const double mu2 = mu * mu;
  const double pimu = std::numbers::pi * mu;
  const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
  double gam1, gam2, gampl, gammi;
  temme_gammas(mu, gam1, gam2, gampl, gammi);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu2);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  if (i > kMaxIter)
    throw BesselEvalFailure("series for K did not settle at x=" + std::to_string(x));
  const double scale = std::exp(x);
  kmu = sum * scale;
  kmu1 = sum1 * (2.0 / x) * scale;
}

// e^x K_mu(x) and e^x K_{mu+1}(x) for |mu| <= 1/2, x > 2 (Steed's CF2).
void scaled_k_cf2(double mu, double x, double& kmu, double& kmu1) {
  const double mu2 = mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter)
    throw BesselEvalFailure("continued fraction for K did not settle at x=" +
                            std::to_string(x));
  h = a1 * h;
  kmu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double scaled_bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(nu))
    throw BesselEvalFailure("K requires finite order and x > 0");
  nu = std::abs(nu);  // K_{-nu} = K_nu
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;  // in [-1/2, 1/2]
  double kmu, kmu1;
  if (x <= 2.0)
    scaled_k_series(mu, x, kmu, kmu1);
  else
    scaled_k_cf2(mu, x, kmu, kmu1);
  for (int i = 1; i <= nl; ++i) {
    const double knext = (mu + i) * (2.0 / x) * kmu1 + kmu;
    kmu = kmu1;
    kmu1 = knext;
  }
  return kmu;
}

double bessel_k(double nu, double x) {
  // exp(-x) underflows to 0 for x beyond ~745; K truly is that small there.
  return scaled_bessel_k(nu, x) * std::exp(-x);
}

double y_pow_k(double nu, double y) {
  if (!(nu > 0.0)) throw BesselEvalFailure("y_pow_k requires nu > 0");
  if (y == 0.0) return std::exp2(nu - 1.0) * std::tgamma(nu);
  // y^nu e^{-y} stays representable long after e^{-y} alone would not.
  const double log_env = nu * std::log(y) - y;
  if (log_env < -745.0) return 0.0;
  return std::exp(log_env) * scaled_bessel_k(nu, y);
}

}  // namespace fraclab
