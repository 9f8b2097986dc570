#ifndef STOPPROFILER_PARALLEL_HPP
#define STOPPROFILER_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace stopprofiler {

// Worker count for internal parallelism. STOPPROFILER_THREADS caps it;
// 0 (or 1, or anything unparseable) means sequential. Re-read on every call
// so tests can flip the variable between runs.
inline unsigned thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("STOPPROFILER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) {
      if (v <= 1) return 1;
      return std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return 1;
  }
  return hw;
}

// Runs fn(begin, end) over disjoint chunks of [0, n). Callers must only use
// this where per-chunk results are position-independent (integer counting,
// per-row writes), so the output is bitwise identical to a sequential run.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = std::min<std::size_t>(thread_cap(), n);
  if (workers <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = static_cast<std::size_t>(w) * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_PARALLEL_HPP
