#pragma once

// Index-parallel loops over replications. Work is handed out in small chunks
// from a shared counter; callers write results into slots indexed by the loop
// variable, so the output never depends on the worker count.

#include <cstddef>
#include <functional>

namespace grenlab {

// Worker count from GRENLAB_THREADS, else the hardware concurrency (at least 1).
unsigned default_workers();

// Runs body(i) for every i in [0, count). The first exception thrown by any
// worker is rethrown after all workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace grenlab
