// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/order.hpp"

#include <cmath>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab {

FractionalOrder make_order(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw NonPositiveOrderError("order must be a positive real, got " + std::to_string(gamma));
  const double fl = std::floor(gamma);
  if (gamma == fl)
    throw IntegerOrderError("integer order " + std::to_string(gamma) +
                            " is excluded (weight b would hit ±1)");
  FractionalOrder ord;
  ord.gamma = gamma;
  ord.m = static_cast<int>(fl);
  ord.a = 1.0 - 2.0 * gamma;
  ord.b = 2.0 * ord.m + 1.0 - 2.0 * gamma;
  return ord;
}

}  // namespace fraclab
