#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace ctoda {

/// Worker count from TODA_THREADS (integer >= 1); hardware concurrency when unset.
/// Throws std::invalid_argument on a malformed value.
int thread_count();

/// Calls body(begin, end) over disjoint chunks of [0, n). Serial below `grain` items.
/// Every index is visited exactly once, so per-index work is schedule independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain = 8192);

/// Pairwise summation in a fixed tree order.
double pairwise_sum(std::span<const double> v);

}  // namespace ctoda
