// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace fraclab {

/// Order bookkeeping for the fractional exponent. For non-integer gamma > 0:
///   m = floor(gamma)            (number of extra operator applications)
///   a = 1 - 2*gamma             (weight of the second-order equation)
///   b = 2m + 1 - 2*gamma        (weight of the energy measure, in (-1,1))
/// with b = a + 2m. The classical square-root case is gamma = 1/2 (a = b = 0).
struct FractionalOrder {
  double gamma = 0.0;
  int m = 0;
  double a = 0.0;
  double b = 0.0;
};

/// Validates gamma and derives (m, a, b). Throws NonPositiveOrderError for
/// gamma <= 0 and IntegerOrderError when gamma is an integer (within a strict
/// floating-point test): integer orders are the classical local operators and
/// the degenerate weight b = ±1 falls outside the admissible range.
FractionalOrder make_order(double gamma);

}  // namespace fraclab
