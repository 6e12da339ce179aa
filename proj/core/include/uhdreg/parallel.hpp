#ifndef UHDREG_PARALLEL_HPP
#define UHDREG_PARALLEL_HPP

#include <thread>
#include <vector>

namespace uhdreg {

/// Runs fn(i) for i in [0, count), chunked across a worker pool when more
/// than one hardware thread is available. Results must be written to
/// per-index slots so aggregation stays order-independent.
template <typename F>
void parallel_for(int count, F&& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  if (workers <= 1 || count < 2) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, w, workers, count] {
      for (int i = static_cast<int>(w); i < count; i += static_cast<int>(workers)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace uhdreg

#endif
