// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace iclab {

/// Number of worker threads used by the parallel loops. Defaults to the
/// hardware concurrency; the CLI sets it from --threads / ICLAB_THREADS.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(begin, end) over a fixed partition of [0, n) into `chunk`-sized
/// pieces. The partition depends only on n and chunk, never on the thread
/// count, so any per-index output is identical for every thread setting.
/// Reductions must be done by the caller over per-index results.
void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace iclab
