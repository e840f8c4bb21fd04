#pragma once

#include <cstddef>
#include <functional>

namespace nestdop {

/// Worker count: NESTDOP_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on a pool of worker_count() threads.
/// Callers write results into index-addressed slots so output order never
/// depends on completion order. The first exception thrown by any body is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nestdop
