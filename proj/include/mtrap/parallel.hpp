#pragma once

#include <cstddef>
#include <functional>

namespace mtrap {

// Worker count: MTRAP_THREADS if set to a positive integer, otherwise the
// hardware concurrency (MTRAP_THREADS=0 also means automatic).
unsigned thread_count();

// Calls body(k) for k in [0,n) using up to thread_count() threads. Work is
// split into contiguous blocks so results written per index are
// deterministic. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mtrap
