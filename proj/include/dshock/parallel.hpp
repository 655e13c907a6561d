#pragma once

#include <cstddef>
#include <functional>

namespace dshock {

// Worker count: hardware concurrency, capped by the DSHOCK_THREADS environment
// variable when it holds a positive integer.
unsigned thread_count();

// Calls body(i) for i in [0, n). Iterations must be independent; the first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dshock
