#pragma once

#include <cstdint>
#include <functional>

namespace nag {

/// Bounds the worker pool used by grid sweeps and experiment loops.
/// Results are independent of the thread count: work is split into a fixed
/// block structure and per-block results are merged in block order.
void set_thread_count(int threads);
int thread_count();

/// Runs fn(block_index) for block_index in [0, blocks), distributing blocks
/// over the worker pool. fn must only write to state owned by its block.
/// Exceptions thrown by fn are captured and rethrown on the calling thread.
void parallel_blocks(std::int64_t blocks, const std::function<void(std::int64_t)>& fn);

}  // namespace nag
