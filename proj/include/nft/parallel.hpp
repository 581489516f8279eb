#ifndef NFT_PARALLEL_HPP
#define NFT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace nft {

/// Worker count: NFT_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Calls body(i) for i in [0, count) on up to `threads` workers (0 selects
/// thread_count()). Work items are claimed dynamically; the first exception
/// thrown by any item is rethrown after all workers have stopped.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

}  // namespace nft

#endif  // NFT_PARALLEL_HPP
