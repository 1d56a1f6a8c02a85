#ifndef KANLAB_PARALLEL_HPP
#define KANLAB_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <cstdint>
#include <thread>
#include <vector>

namespace kanlab {

// Worker count: KANLAB_WORKERS env var, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("KANLAB_WORKERS")) {
    long n = std::atol(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n). Results must be written to slots indexed by i
// so the output is identical for any worker count.
template <typename Fn>
void parallel_for(std::uint64_t n, Fn&& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  const std::uint64_t chunk = (n / (workers * 8)) + 1;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t begin = next.fetch_add(chunk);
        if (begin >= n) break;
        std::uint64_t end = begin + chunk < n ? begin + chunk : n;
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace kanlab

#endif  // KANLAB_PARALLEL_HPP
