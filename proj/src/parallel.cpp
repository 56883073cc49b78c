// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#include "arena/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace arena {

int worker_count() {
  if (const char* env = std::getenv("ARENA_WORKERS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

}  // namespace arena
