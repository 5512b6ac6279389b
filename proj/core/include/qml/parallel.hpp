#pragma once

#include <cstddef>
#include <functional>

namespace qml {

// Process-wide worker count for parallel_for. 0 means hardware concurrency.
void set_thread_count(int threads);
int thread_count();

// Runs fn(i) for i in [0, n). Work items must be independent and write only
// to their own slots; the schedule is dynamic, so determinism comes from the
// items, never from execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace qml
