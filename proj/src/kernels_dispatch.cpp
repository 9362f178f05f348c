// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fraclab::kernels {
namespace {

const Backend* pick() {
  const char* env = std::getenv("FRACLAB_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &scalar();
    if (std::strcmp(env, "avx2") == 0) {
      if (const Backend* b = avx2_if_supported()) return b;
      return &scalar();  // requested but unavailable: degrade quietly
    }
  }
  if (const Backend* b = avx2_if_supported()) return b;
  return &scalar();
}

}  // namespace

const Backend& active() {
  static const Backend* chosen = pick();
  return *chosen;
}

std::string_view active_name() { return active().name; }

}  // namespace fraclab::kernels
