#pragma once

#include <cstddef>
#include <functional>

namespace boxforge {

// Worker count: BOXFORGE_THREADS when set to a positive integer,
// hardware_concurrency otherwise.
int default_thread_count();

// Runs fn(i) for every i in [0, n) on up to `threads` workers. fn must be
// safe to call concurrently for distinct i. If any invocation throws, the
// first exception is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int threads = default_thread_count());

}  // namespace boxforge
