// Copyright 2026 The Arena Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace arena {

/// Every data-parallel kernel has a serial reference path selected by this
/// flag. Both paths compute each item independently, so results are
/// bit-identical regardless of thread count.
enum class Execution { serial, parallel };

/// Worker count: ARENA_WORKERS if set and positive, otherwise the OpenMP default.
int worker_count();

/// Runs fn(i) for i in [0, n). Under Execution::parallel the iterations are
/// spread over OpenMP threads; the first exception (lowest index) is rethrown
/// after the loop completes.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn, int threads = 0) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
  const int nthreads = threads > 0 ? threads : worker_count();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace arena
