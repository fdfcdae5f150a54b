#include "rpd/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rpd {

namespace {
thread_local bool g_inside_parallel_for = false;
}  // namespace

int worker_count(long long jobs) {
  if (jobs <= 1) return 1;
  long long workers = std::thread::hardware_concurrency();
  if (workers <= 0) workers = 1;
  if (const char* cap = std::getenv("RIEMANN_PD_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && parsed > 0) {
      workers = std::min<long long>(workers, parsed);
    }
  }
  return static_cast<int>(std::min(workers, jobs));
}

void parallel_for(long long n, const std::function<void(long long)>& fn) {
  if (n <= 0) return;
  const int workers = g_inside_parallel_for ? 1 : worker_count(n);
  if (workers == 1) {
    for (long long i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  long long first_failed_index = -1;
  std::exception_ptr first_error;

  auto work = [&]() {
    g_inside_parallel_for = true;
    while (true) {
      const long long i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n || failed.load(std::memory_order_relaxed)) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_failed_index < 0 || i < first_failed_index) {
          first_failed_index = i;
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
    g_inside_parallel_for = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rpd
