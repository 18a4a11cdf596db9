#pragma once

#include <cstddef>
#include <functional>

namespace swion {

/// Worker count: SWION_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls fn(i) for i in [0, n) across worker_count() threads. Each index is
/// visited exactly once; fn must only write to slot i of its outputs.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace swion
