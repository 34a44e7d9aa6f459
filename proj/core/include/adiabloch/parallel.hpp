#pragma once

#include <cstddef>
#include <functional>

namespace adiabloch {

// Worker count: ADIABLOCH_THREADS if set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
std::size_t thread_count();

// Runs body(i) for i in [0, n). The first exception thrown by any iteration
// is rethrown on the calling thread after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace adiabloch
