#pragma once

// Index-parallel loop over [0, n). Each index is processed exactly once and
// results are written by index, so output is independent of the schedule.
// The worker count is min(hardware threads, RYDCHIP_THREADS) when the
// environment variable is set to a positive integer.

#include <cstddef>
#include <functional>

namespace rydchip {

/// Number of workers that parallel_for will use.
unsigned worker_count();

/// Runs body(i) for every i in [0, n). After all workers stop, the exception
/// from the lowest failing index seen is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rydchip
