#pragma once

#include <cstddef>
#include <functional>

namespace subdiff::detail {

/// Runs body(i) for i in [0, count) across worker threads. Thread count
/// comes from the SUBDIFF_THREADS environment variable (default: hardware
/// concurrency, capped at 8). Bodies must write disjoint state; results are
/// bitwise independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace subdiff::detail
