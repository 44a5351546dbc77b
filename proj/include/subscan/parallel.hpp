#pragma once

#include <cstddef>
#include <functional>

namespace subscan {

/// Number of worker threads used by parallel loops. Reads SUBSCAN_THREADS
/// once (falls back to hardware concurrency) unless overridden.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Runs body(i) for i in [0, n). Iterations must not share mutable state.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace subscan
