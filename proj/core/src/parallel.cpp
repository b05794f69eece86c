#include "sparsevar/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sparsevar {
namespace {
std::atomic<unsigned> g_thread_limit{1};
thread_local bool t_inside_region = false;
}  // namespace

void set_thread_limit(unsigned threads) { g_thread_limit.store(std::max(1u, threads)); }

unsigned thread_limit() { return g_thread_limit.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  // Nested regions run inline on the calling worker.
  const std::size_t workers = t_inside_region ? 1 : std::min<std::size_t>(thread_limit(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    const bool was_inside = t_inside_region;
    t_inside_region = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    t_inside_region = was_inside;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sparsevar
