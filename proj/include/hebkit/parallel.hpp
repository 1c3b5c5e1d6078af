#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace hebkit {

/**
 * Applies fn to 0..n-1 on up to `threads` workers and returns results in
 * index order, so parallel runs are byte-identical to sequential ones.
 * fn must not depend on call order across indices.
 */
template <typename Fn>
auto parallel_map(size_t n, size_t threads, Fn&& fn)
    -> std::vector<decltype(fn(size_t{0}))> {
  using Result = decltype(fn(size_t{0}));
  std::vector<Result> results(n);
  if (n == 0) return results;
  if (threads <= 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      results[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  const size_t count = std::min(threads, n);
  pool.reserve(count);
  for (size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace hebkit
