#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace degenlab {

// Worker count: DEGENLAB_THREADS caps parallelism; default is the machine's.
int thread_count();

// Splits [0, n) into contiguous chunks and runs fn(lo, hi) on each, in
// parallel when more than one worker is available.  Callers must keep chunk
// work independent (elementwise writes, per-chunk reductions merged by the
// caller in chunk order) so results are identical for any worker count.
template <class Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
  const int workers = thread_count();
  if (workers <= 1 || n < 2048) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::vector<std::thread> pool;
  pool.reserve(parts);
  const std::size_t base = n / parts, extra = n % parts;
  std::size_t lo = 0;
  for (std::size_t c = 0; c < parts; ++c) {
    const std::size_t hi = lo + base + (c < extra ? 1 : 0);
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    lo = hi;
  }
  for (auto& t : pool) t.join();
}

}  // namespace degenlab
