#pragma once

#include <cstddef>
#include <functional>

namespace lfss {

/// Number of worker threads used by parallel loops (default: hardware concurrency).
/// Results never depend on this value.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Run body(begin, end) over disjoint chunks of [0, n). Chunking is fixed by
/// `grain`, not by the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 1024);

}  // namespace lfss
