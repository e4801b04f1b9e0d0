#pragma once

#include <cstddef>
#include <functional>

namespace uq {

/// Worker-thread budget: min(UQ_THREADS, hardware concurrency), at least 1.
std::size_t thread_count();

/// Runs fn(i) for i in [0, count) on up to thread_count() threads. The
/// callable must be safe to run concurrently for distinct i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace uq
