#pragma once

#include <cstddef>
#include <functional>

namespace lipfit {

// Worker count: LIPFIT_THREADS if set to a positive integer, else the
// hardware concurrency.
std::size_t thread_count();

// Runs fn(i) for i in [0, n). Each index writes only its own output slot, so
// results do not depend on scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace lipfit
