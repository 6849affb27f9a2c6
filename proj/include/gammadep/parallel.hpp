#pragma once
// Deterministic fork-join over an index range.

#include <cstddef>
#include <functional>
#include <optional>

namespace gammadep {

/// Explicit value wins, then GAMMADEP_THREADS, then hardware concurrency. Always >= 1.
unsigned resolve_threads(std::optional<unsigned> requested = std::nullopt);

/// Calls body(i) for every i in [0, count). Work is split into contiguous
/// blocks; callers write results into slot i so the outcome never depends on
/// the thread count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace gammadep
