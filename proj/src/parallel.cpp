#include "rdeuler/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rd {

namespace {

int g_workers = 0;

int default_workers()
{
  if (const char *env = std::getenv("RDEULER_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

int worker_count()
{
  if (g_workers <= 0) g_workers = default_workers();
  return g_workers;
}

void set_worker_count(int n) { g_workers = n > 0 ? n : default_workers(); }

void parallel_for(int n, const std::function<void(int, int)> &fn)
{
  const int w = std::min(worker_count(), std::max(1, n / 64));
  if (w <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mtx;
  for (int t = 0; t < w; ++t) {
    const int b = static_cast<int>(static_cast<long long>(n) * t / w);
    const int e = static_cast<int>(static_cast<long long>(n) * (t + 1) / w);
    pool.emplace_back([&, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mtx);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

} // namespace rd
