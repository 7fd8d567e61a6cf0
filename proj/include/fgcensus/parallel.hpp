#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fgc {

/// Run `shard_fn(shard)` for shard = 0..n_shards-1 on up to n_threads
/// workers. The shard decomposition is fixed by the caller and independent
/// of the thread count; callers store per-shard results and reduce them in
/// shard order, which makes every result bit-identical for any thread count.
inline void run_sharded(int n_shards, int n_threads, const std::function<void(int)>& shard_fn) {
  if (n_threads <= 1 || n_shards <= 1) {
    for (int s = 0; s < n_shards; ++s) shard_fn(s);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      int s = next.fetch_add(1);
      if (s >= n_shards) return;
      try {
        shard_fn(s);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int workers = std::min(n_threads, n_shards);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fgc
