// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace fraclab {

/// Worker cap: min(hardware_concurrency, FRACLAB_THREADS if set). Always ≥ 1.
std::size_t worker_limit();

/// Runs fn(i) for i in [0, n), split into contiguous chunks across at most
/// worker_limit() threads. Each index is visited exactly once; callers keep
/// determinism by writing to disjoint slots and reducing serially afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fraclab
