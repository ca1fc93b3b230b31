#pragma once

#include <cstddef>
#include <functional>

namespace dilute {

/// Runs task(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Tasks must write only to their own output slot; the first
/// exception by task index is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task);

unsigned resolve_threads(unsigned requested);

} // namespace dilute
