#pragma once

#include <cstddef>
#include <functional>

namespace ontoqubit {

/// Worker count: hardware concurrency, capped by ONTOQUBIT_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// executed exactly once; results must be written to per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ontoqubit
