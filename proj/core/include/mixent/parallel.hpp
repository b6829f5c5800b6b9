#pragma once

#include <cstdint>
#include <functional>

namespace mixent {

/// Default worker count: MIXENT_THREADS if set, else hardware concurrency.
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) on `threads` workers (0 = default, 1 = the
/// calling thread). Work items claim indices from a shared counter; callers
/// get determinism by writing results into per-index slots, never by relying
/// on execution order. The first exception thrown by any worker is rethrown.
void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t)>& body);

}  // namespace mixent
