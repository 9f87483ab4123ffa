#include "nag/parallel.hpp"

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace nag {

namespace {
int g_threads = 0;  // 0 = hardware concurrency
}

void set_thread_count(int threads) { g_threads = threads > 0 ? threads : 0; }

int thread_count() {
  if (g_threads > 0) return g_threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_blocks(std::int64_t blocks, const std::function<void(std::int64_t)>& fn) {
  if (blocks <= 0) return;
  const int workers = static_cast<int>(std::min<std::int64_t>(thread_count(), blocks));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const std::int64_t b = next.fetch_add(1);
          if (b >= blocks) break;
          fn(b);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace nag
