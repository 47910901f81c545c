#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace symgeo::detail {

/// Runs task(0..count-1) on up to `threads` workers. Tasks write only to
/// their own slot, so results do not depend on scheduling.
template <typename Task>
void run_parallel(int count, int threads, Task&& task) {
  const int workers = std::max(1, std::min(count, threads));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) task(i);
  };
  if (workers == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline int resolve_threads(int requested) {
  return requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace symgeo::detail
