#pragma once

#include <cstddef>
#include <functional>

namespace ohara {

/// Evaluation knobs shared by the O(n^2) kernels.
struct EvalOptions {
  /// Worker count; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned requested);

/// Runs body(b) for every b in [0, block_count) across up to `threads`
/// workers. Blocks are claimed dynamically, so callers must write results
/// into per-block slots. If any block throws, the exception of the lowest
/// failing block index is rethrown after all workers join.
void parallel_for_blocks(std::size_t block_count, unsigned threads,
                         const std::function<void(std::size_t)> &body);

} // namespace ohara
