// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Base class for all fraclab failures. Everything thrown on purpose derives
/// from this, so callers can catch one type at the CLI boundary.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// -- order / core -----------------------------------------------------------
struct IntegerOrderError : Error { using Error::Error; };
struct NonPositiveOrderError : Error { using Error::Error; };
struct GridMismatchError : Error { using Error::Error; };

// -- profile ----------------------------------------------------------------
struct BesselEvalFailure : Error { using Error::Error; };
struct SingularSystemError : Error { using Error::Error; };
struct NonDecayingError : Error { using Error::Error; };
struct QuadratureDivergenceError : Error { using Error::Error; };
struct ExtrapolationUnstableError : Error { using Error::Error; };

// -- extension field --------------------------------------------------------
struct InsufficientGridError : Error { using Error::Error; };
struct DivergentEnergyError : Error { using Error::Error; };
struct WrongOrderError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };

// -- frequency --------------------------------------------------------------
struct QuadratureOutOfDomainError : Error { using Error::Error; };
struct ZeroHError : Error { using Error::Error; };
struct InsufficientRadiiError : Error { using Error::Error; };
struct UnsupportedDimensionError : Error { using Error::Error; };

// -- cli --------------------------------------------------------------------
struct UsageError : Error { using Error::Error; };

}  // namespace fraclab
