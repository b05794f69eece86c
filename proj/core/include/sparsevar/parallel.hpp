#pragma once

#include <cstddef>
#include <functional>

namespace sparsevar {

/// Process-wide cap on worker threads used by the library (default 1).
void set_thread_limit(unsigned threads);
unsigned thread_limit();

/// Runs body(i) for i in [0, n) on up to thread_limit() threads. Each index is
/// executed exactly once; callers write results into pre-sized slots so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sparsevar
