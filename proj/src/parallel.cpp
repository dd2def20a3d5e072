#include "ohara/parallel.hpp"
#include "ohara/summation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace ohara {

double pairwise_sum(std::span<const double> values) {
  if (values.empty())
    return 0.0;
  if (values.size() == 1)
    return values[0];
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0)
    return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for_blocks(std::size_t block_count, unsigned threads,
                         const std::function<void(std::size_t)> &body) {
  std::vector<std::exception_ptr> errors(block_count);
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_threads(threads), block_count));

  if (workers <= 1) {
    for (std::size_t b = 0; b < block_count; ++b) {
      try {
        body(b);
      } catch (...) {
        errors[b] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= block_count)
          return;
        try {
          body(b);
        } catch (...) {
          errors[b] = std::current_exception();
        }
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(worker);
  }

  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace ohara
