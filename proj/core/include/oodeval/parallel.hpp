#pragma once

#include <cstddef>
#include <functional>

namespace oodeval {

/// Runs fn(begin, end) over disjoint chunks of [0, n) on up to `threads`
/// worker threads (0 = hardware concurrency). Callers guarantee chunks touch
/// disjoint state; results must not depend on the chunking.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace oodeval
